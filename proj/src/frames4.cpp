#include "g2frames/frames4.hpp"

#include "g2frames/models.hpp"

namespace g2frames {

namespace {

Branch opposite(Branch b) { return b == Branch::Plus ? Branch::Minus : Branch::Plus; }

Matrix3 pairing(const std::array<Multivector, 3>& rows, Branch basis) {
  Matrix3 m;
  for (int i = 0; i < 3; ++i) {
    const auto c = dualityComponents(rows[i], basis);
    for (int j = 0; j < 3; ++j) m(i, j) = c[j];
  }
  return m;
}

SingerThorpe assemble(const std::array<Multivector, 3>& plusRows, const std::array<Multivector, 3>& minusRows,
                      double scal, int sign) {
  SingerThorpe st;
  st.A = -static_cast<double>(sign) * pairing(plusRows, Branch::Plus);
  st.B = static_cast<double>(sign) * pairing(plusRows, Branch::Minus);
  st.C = static_cast<double>(sign) * pairing(minusRows, Branch::Minus);
  st.scal = scal;
  st.s = scal / 12.0;
  st.Wplus = st.A - (st.A.trace() / 3.0) * Matrix3::Identity();
  st.Wminus = st.C - (st.C.trace() / 3.0) * Matrix3::Identity();
  return st;
}

int anchorSign() {
  const MetricField sphere([](const auto& x) { return metrics::sphere4(x, 1.0); });
  const auto f = frameJets<2>(sphere, {0.11, -0.23, 0.31, 0.07});
  const auto plus = dualityBases(f, Branch::Plus);
  const auto minus = dualityBases(f, Branch::Minus);
  const auto raw = assemble(curvatureRows(f, plus), curvatureRows(f, minus), 12.0, 1);
  const double tr = raw.A.trace();
  if (std::abs(std::abs(tr) - 3.0) > 1e-8 || std::abs(raw.C.trace() - std::copysign(3.0, tr)) > 1e-8)
    throw std::logic_error("curvature anchor on the unit sphere failed: tr A = " + std::to_string(tr) +
                           ", tr C = " + std::to_string(raw.C.trace()));
  return tr > 0 ? 1 : -1;
}

}  // namespace

std::array<double, 3> dualityComponents(const Multivector& alpha, Branch branch) {
  if (alpha.dim() != 4 || alpha.degree() != 2) throw DimensionError("dualityComponents expects a 2-form on R^4");
  const auto e = dualityForms(branch, 4, 0);
  // |e^j|^2 = 2 in the orthonormal frame.
  std::array<double, 3> out;
  for (int j = 0; j < 3; ++j) {
    double dot = 0.0;
    for (int k = 0; k < alpha.size(); ++k) dot += alpha[k] * e[j][k];
    out[j] = 0.5 * dot;
  }
  return out;
}

int curvatureSign() {
  static const int sign = anchorSign();
  return sign;
}

SingerThorpe singerThorpe(const std::array<Multivector, 3>& plusRows, const std::array<Multivector, 3>& minusRows,
                          double scal) {
  return assemble(plusRows, minusRows, scal, curvatureSign());
}

Matrix3 oppositeBlock(const std::array<Multivector, 3>& rows, Branch branch) {
  return pairing(rows, opposite(branch));
}

double scalarCurvature(const std::array<std::array<Multivector, 4>, 4>& rho) {
  double scal = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      if (a != b) scal += rho[a][b].get({a, b});
  return scal;
}

CurvatureFlags predicates(const SingerThorpe& st, double tol) {
  CurvatureFlags f;
  f.einstein = st.B.cwiseAbs().maxCoeff() < tol;
  f.sd = st.Wminus.cwiseAbs().maxCoeff() < tol;
  f.asd = st.Wplus.cwiseAbs().maxCoeff() < tol;
  f.scalarFlat = std::abs(st.scal) < tol;
  f.s = st.s;
  f.sSign = std::abs(st.s) < tol ? 0 : (st.s > 0 ? 1 : -1);
  return f;
}

PointGeometry analyzePoint(const MetricField& metric, const Point<4>& x, int orientation) {
  const auto f = frameJets<2>(metric, x, orientation);
  PointGeometry out;
  out.x = x;

  const auto omega = value(f.omega);
  out.omegaSkew = skewDefect(omega);
  std::array<Multivector, 4> theta;
  for (int a = 0; a < 4; ++a) theta[a] = value(f.theta[a]);
  for (int j = 0; j < 4; ++j) {
    Multivector r = value(exteriorDerivative(f.theta[j]));
    for (int i = 0; i < 4; ++i) r += wedge(theta[i], omega(i, j));
    out.cartanResidual = std::max(out.cartanResidual, maxAbs(r));
  }

  const auto rv = value(f.rho);
  out.rhoSkew = skewDefect(rv);
  std::array<std::array<Multivector, 4>, 4> rho;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      rho[a][b] = inFrame(f, rv(a, b));
      out.sectional[a][b] = a == b ? 0.0 : rho[a][b].get({a, b});
    }

  std::array<std::array<Multivector, 3>, 2> rows;
  for (auto branch : {Branch::Plus, Branch::Minus}) {
    const auto d = dualityBases(f, branch);
    const auto wP = value(d.omegaP);
    const auto rP = value(d.rhoP);
    for (int i = 0; i < 3; ++i) {
      Multivector de = value(exteriorDerivative(d.eta[i]));
      Multivector bianchi(4, 4);
      for (int j = 0; j < 3; ++j) {
        const auto eta = value(d.eta[j]);
        de -= wedge(eta, wP(j, i));
        bianchi += wedge(eta, rP(j, i));
      }
      out.dualityResidual = std::max(out.dualityResidual, maxAbs(de));
      out.bianchiResidual = std::max(out.bianchiResidual, maxAbs(bianchi));
    }
    rows[branch == Branch::Plus ? 0 : 1] = curvatureRows(f, d);
  }

  out.st = singerThorpe(rows[0], rows[1], scalarCurvature(rho));
  out.asymmetryA = (out.st.A - out.st.A.transpose()).cwiseAbs().maxCoeff();
  out.asymmetryC = (out.st.C - out.st.C.transpose()).cwiseAbs().maxCoeff();
  out.traceGap = std::max(std::abs(out.st.A.trace() - out.st.C.trace()), std::abs(out.st.A.trace() - out.st.scal / 4.0));
  return out;
}

}  // namespace g2frames
