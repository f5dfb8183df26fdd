#include <random>

#include "g2frames/bundle7.hpp"

namespace g2frames {

namespace {

std::array<double, 49> inverseRows(const Matrix7Rows& rows) {
  Matrix7 m;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) m(i, j) = rows[i][j];
  Eigen::FullPivLU<Matrix7> lu(m);
  if (lu.rank() < 7) throw ChartDomainError("adapted coframe is degenerate at this point");
  const Matrix7 inv = lu.inverse();
  std::array<double, 49> out;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) out[i * 7 + j] = inv(i, j);
  return out;
}

Branch opposite(Branch b) { return b == Branch::Plus ? Branch::Minus : Branch::Plus; }

MatrixForm<double> scalarColumn(const std::array<double, 3>& a) {
  MatrixForm<double> c(3, 1, 7, 0);
  for (int i = 0; i < 3; ++i) c(i, 0) = Multivector::scalar(7, a[i]);
  return c;
}

MatrixForm<double> adaptedRow(const std::array<Multivector, 3>& v) { return MatrixForm<double>::row({v[0], v[1], v[2]}); }

}  // namespace

ChartX buildChartX(const ModelSpec& model, Branch branch, const Profile& profile) {
  if (!profile.contains(0.0)) throw ChartDomainError("profile " + profile.describe() + " does not contain r = 0");
  return ChartX{model, branch, profile};
}

double branchS(const SingerThorpe& st, Branch branch) {
  return (branch == Branch::Plus ? st.A.trace() : st.C.trace()) / 3.0;
}

XPoint evaluateX(const ChartX& chart, const Point<4>& x, const std::array<double, 3>& a) {
  const auto frame = frameJets<2>(chart.model.metric, x, chart.model.orientation);
  const auto dual = dualityBases(frame, chart.branch);
  const auto j = xJets<1>(chart, frame, dual, a);
  const auto inv = inverseRows(j.adapted);
  const auto toAdapted = [&inv](const Multivector& m) { return changeBasis(m, inv); };

  XPoint p;
  p.x = x;
  p.a = a;
  p.r = j.r.value();
  p.profile = chart.profile.values(p.r);
  const double l = p.profile.lambda, m = p.profile.mu;
  p.standard = standardPhi(l, m, chart.branch);
  p.phi = toAdapted(value(j.phi));
  p.psi = toAdapted(value(j.psi));
  p.dphi = toAdapted(value(exteriorDerivative(j.phi)));
  p.dpsi = toAdapted(value(exteriorDerivative(j.psi)));
  p.phiResidual = maxAbs(p.phi - p.standard.phi);
  p.psiResidual = maxAbs(p.psi - p.standard.psi);

  const auto rec = metricFromPhi(p.phi, p.standard.orientation);
  for (int i = 0; i < 7; ++i)
    for (int k = 0; k < 7; ++k)
      p.metricResidual =
          std::max(p.metricResidual, std::abs(rec.gram(i, k) - (i == k ? p.standard.metricDiag[i] : 0.0)));

  p.st = singerThorpe(frame);
  p.opposite = oppositeBlock(curvatureRows(frame, dual), chart.branch);

  // Chart-basis identities of the canonical forms.
  std::array<Multivector, 3> fv, etav, hv;
  for (int i = 0; i < 3; ++i) {
    fv[i] = value(j.f[i]);
    etav[i] = value(j.eta[i]);
    hv[i] = value(j.h[i]);
  }
  Multivector twoFa(7, 1), etaF(7, 3);
  for (int i = 0; i < 3; ++i) {
    twoFa += (2.0 * a[i]) * fv[i];
    etaF += wedge(etav[i], fv[i]);
  }
  p.drResidual = maxAbs(value(exteriorDerivative(JetForm<7, 1>::scalar(7, j.r))) - twoFa);
  p.tautologicalResidual = maxAbs(value(exteriorDerivative(j.tautological)) - etaF);
  const auto rhoChart = value(liftMatrix<7, 0>(dual.rhoP, 3));
  const auto hRhoA = (adaptedRow(hv) * rhoChart * scalarColumn(a)).scalarEntry();
  p.betaResidual = maxAbs(value(exteriorDerivative(j.beta)) - hRhoA);

  // Structure system in the adapted basis.
  const double sigma = sign(chart.branch);
  const double dl = p.profile.dlambda, dm = p.profile.dmu;
  std::array<Multivector, 3> fb, hb;
  for (int i = 0; i < 3; ++i) fb[i] = Multivector::basis(7, {i});
  hb = {wedge(fb[1], fb[2]), wedge(fb[2], fb[0]), wedge(fb[0], fb[1])};
  const auto eta = dualityForms(chart.branch, 7, 3);
  const auto beta = wedge(fb[0], fb[1], fb[2]);
  const auto vol = Multivector::basis(7, {3, 4, 5, 6});
  Multivector dr(7, 1), etaFb(7, 3), etaHb(7, 4);
  for (int i = 0; i < 3; ++i) {
    dr += (2.0 * a[i]) * fb[i];
    etaFb += wedge(eta[i], fb[i]);
    etaHb += wedge(eta[i], hb[i]);
  }
  MatrixForm<double> rho(3, 3, 7, 2);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      p.rhoP[i][k] = toAdapted(rhoChart(i, k));
      rho(i, k) = p.rhoP[i][k];
    }
  const auto col = scalarColumn(a);
  const auto hRho = (adaptedRow(hb) * rho * col).scalarEntry();
  const auto etaCheckFRho = (adaptedRow(eta) * check(adaptedRow(fb)) * rho * col).scalarEntry();

  p.dphiSystem = (3.0 * l * l * dl) * wedge(dr, beta) + (l * l * l) * hRho -
                 (sigma * (dl * m * m + 2.0 * l * m * dm)) * wedge(dr, etaFb);
  p.dpsiSystem = (4.0 * m * m * m * dm) * wedge(dr, vol) - (2.0 * l * dl * m * m + 2.0 * l * l * m * dm) * wedge(dr, etaHb) +
                 (l * l * m * m) * etaCheckFRho;
  p.systemResidualPhi = maxAbs(p.dphi - p.dphiSystem);
  p.systemResidualPsi = maxAbs(p.dpsi - p.dpsiSystem);
  return p;
}

std::pair<double, double> secondDerivativeResidualX(const ChartX& chart, const Point<4>& x,
                                                    const std::array<double, 3>& a) {
  const auto frame = frameJets<3>(chart.model.metric, x, chart.model.orientation);
  const auto dual = dualityBases(frame, chart.branch);
  const auto j = xJets<2>(chart, frame, dual, a);
  return {maxAbs(value(exteriorDerivative(exteriorDerivative(j.phi)))),
          maxAbs(value(exteriorDerivative(exteriorDerivative(j.psi))))};
}

TorsionForms torsionXNumeric(const XPoint& p) { return torsionDecompose(p.standard, p.dphi, p.dpsi); }

TorsionForms torsionXClosed(const XPoint& p, const Profile& profile, Branch branch, double hypothesisTol) {
  const Matrix3& wrong = branch == Branch::Plus ? p.st.Wplus : p.st.Wminus;
  const double w = wrong.cwiseAbs().maxCoeff();
  if (w > hypothesisTol) {
    throw DualityHypothesisError(branch == Branch::Plus
                                     ? "closed-form torsion on the self-dual bundle needs an anti-self-dual base "
                                       "(W+ = 0), but max|W+| = " +
                                           std::to_string(w)
                                     : "closed-form torsion on the anti-self-dual bundle needs a self-dual base "
                                       "(W- = 0), but max|W-| = " +
                                           std::to_string(w));
  }
  const double sigma = sign(branch);
  const double s = branchS(p.st, branch);
  const double l = p.profile.lambda, m = p.profile.mu;
  const auto rf = radialFactors(profile, s, p.r);

  std::array<Multivector, 3> fb;
  for (int i = 0; i < 3; ++i) fb[i] = Multivector::basis(7, {i});
  const std::array<Multivector, 3> hb{wedge(fb[1], fb[2]), wedge(fb[2], fb[0]), wedge(fb[0], fb[1])};
  const auto eta = dualityForms(branch, 7, 3);
  const auto etaOpp = dualityForms(opposite(branch), 7, 3);

  Multivector dr(7, 1), hA(7, 2), etaA(7, 2);
  for (int i = 0; i < 3; ++i) {
    dr += (2.0 * p.a[i]) * fb[i];
    hA += p.a[i] * hb[i];
    etaA += p.a[i] * eta[i];
  }
  std::array<Multivector, 3> rhoB;
  for (int i = 0; i < 3; ++i) {
    rhoB[i] = Multivector(7, 2);
    for (int k = 0; k < 3; ++k) rhoB[i] += p.opposite(i, k) * etaOpp[k];
  }

  TorsionForms t;
  t.metricDiag = p.standard.metricDiag;
  t.tau0 = 0.0;
  t.tau1 = (2.0 / (3.0 * l * l * m * m * m * m) * rf.tau1) * dr;
  t.tau2 = (-sigma * rf.tau2) * ((4.0 * l * l * l / (3.0 * m * m)) * hA + (sigma * 2.0 * l / 3.0) * etaA);
  t.tau3 = (-sigma * l * l) * (adaptedRow(fb) * check(adaptedRow(rhoB)) * scalarColumn(p.a)).scalarEntry();
  return t;
}

std::vector<std::array<double, 3>> fibreProbesX(const Profile& p, int count, std::uint64_t seed) {
  const double rmax = p.rMax();
  const double radius = std::isfinite(rmax) ? std::min(3.0, std::sqrt(0.9 * rmax)) : 3.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<double, 3>> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    std::array<double, 3> a{u(rng), u(rng), u(rng)};
    if (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] >= 1.0) continue;
    for (double& c : a) c *= radius;
    out.push_back(a);
  }
  return out;
}

}  // namespace g2frames
