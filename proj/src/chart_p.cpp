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

double maxAbsM(const MatrixForm<double>& m) {
  double r = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r = std::max(r, maxAbs(m(i, j)));
  return r;
}

MatrixForm<double> rowOf(const std::array<Multivector, 3>& v) { return MatrixForm<double>::row({v[0], v[1], v[2]}); }

// Left and right multiplication by the unit quaternion q on R^4 = H.
Eigen::Matrix4d leftMul(const Eigen::Vector4d& q) {
  Eigen::Matrix4d m;
  m << q[0], -q[1], -q[2], -q[3], q[1], q[0], -q[3], q[2], q[2], q[3], q[0], -q[1], q[3], -q[2], q[1], q[0];
  return m;
}

Eigen::Matrix4d rightMul(const Eigen::Vector4d& q) {
  Eigen::Matrix4d m;
  m << q[0], -q[1], -q[2], -q[3], q[1], q[0], q[3], -q[2], q[2], -q[3], q[0], q[1], q[3], q[2], -q[1], q[0];
  return m;
}

// The rotation G of the duality basis induced by theta' = theta R:
// eta(theta') = eta(theta) G.
Eigen::Matrix3d inducedRotation(const Eigen::Matrix4d& R, Branch branch) {
  const auto e = dualityForms(branch, 4, 0);
  std::array<double, 16> inv;
  for (int mu = 0; mu < 4; ++mu)
    for (int i = 0; i < 4; ++i) inv[mu * 4 + i] = R(i, mu);
  Eigen::Matrix3d G;
  for (int i = 0; i < 3; ++i) {
    const auto c = dualityComponents(changeBasis(e[i], inv), branch);
    for (int j = 0; j < 3; ++j) G(j, i) = c[j];
  }
  return G;
}

}  // namespace

ChartP buildChartP(const ModelSpec& model, Branch branch, double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw ChartDomainError("P chart needs constant lambda, mu > 0");
  return ChartP{model, branch, lambda, mu};
}

PPoint evaluateP(const ChartP& chart, const Point<4>& x, const std::array<double, 3>& u) {
  const double un = std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  if (!(un < kExpChartRadius))
    throw ChartDomainError("exponential chart needs |u| < pi - 0.1, got |u| = " + std::to_string(un));
  const auto frame = frameJets<2>(chart.model.metric, x, chart.model.orientation);
  const auto dual = dualityBases(frame, chart.branch);
  const auto j = pJets<1>(chart, frame, dual, u);

  PPoint p;
  p.x = x;
  p.u = u;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) p.g(i, k) = j.g[i][k].value();

  // A rotation R of the base coframe whose action on the duality basis is g,
  // so that eta g is the duality basis of theta R.
  Eigen::Vector4d q(std::cos(0.5 * un), 0.0, 0.0, 0.0);
  const double sc = un > 0.0 ? std::sin(0.5 * un) / un : 0.5;
  for (int i = 0; i < 3; ++i) q[i + 1] = sc * u[i];
  const std::array<std::pair<const char*, Eigen::Matrix4d>, 4> candidates{{{"left", leftMul(q)},
                                                                           {"left-transposed", leftMul(q).transpose()},
                                                                           {"right", rightMul(q)},
                                                                           {"right-transposed", rightMul(q).transpose()}}};
  double best = 1e300;
  for (const auto& [name, R] : candidates) {
    const double err = (inducedRotation(R, chart.branch) - p.g).cwiseAbs().maxCoeff();
    if (err < best) {
      best = err;
      p.frameRotation = R;
      p.frameRotationKind = name;
    }
  }
  if (best > 1e-10) throw std::logic_error("no quaternion action realizes the fibre rotation");

  Matrix7Rows rows{};
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 7; ++c) rows[i][c] = j.f[i][c].value();
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 7; ++c) {
      double v = 0.0;
      for (int a = 0; a < 4; ++a) v += j.theta[a][c].value() * p.frameRotation(a, b);
      rows[3 + b][c] = v;
    }
  const auto inv = inverseRows(rows);
  const auto toAdapted = [&inv](const Multivector& m) { return changeBasis(m, inv); };

  const double l = chart.lambda, m = chart.mu;
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

  const auto W = value(j.omega);
  const auto Rho = value(j.rho);
  const auto rhoHatRow = hat(Rho);
  for (int i = 0; i < 3; ++i) {
    p.rhoHat[i] = toAdapted(rhoHatRow(0, i));
    p.horizontalResidual = std::max(
        p.horizontalResidual, maxAbs(p.rhoHat[i] - liftForm(restrictForm(p.rhoHat[i], 3, 4), 7, 3)));
  }
  p.st = singerThorpe(frame);

  // Identities among the canonical forms, evaluated in the chart basis.
  const double sigma = sign(chart.branch);
  std::array<Multivector, 3> fv, ev, dfv;
  for (int i = 0; i < 3; ++i) {
    fv[i] = value(j.f[i]);
    ev[i] = value(j.eta[i]);
    dfv[i] = value(exteriorDerivative(j.f[i]));
  }
  const auto F = rowOf(fv);
  const auto Ft = F.transpose();
  const auto E = rowOf(ev);
  const auto beta = value(j.beta);
  const auto vol = value(j.vol);
  const MatrixForm<double> h = MatrixForm<double>::row({wedge(fv[1], fv[2]), wedge(fv[2], fv[0]), wedge(fv[0], fv[1])});
  auto& id = p.identities;

  id["half f omega = (f23, f31, f12)"] = maxAbsM(0.5 * (F * W) - h);
  id["rhoHat = df + half f omega"] = maxAbsM(rhoHatRow - (rowOf(dfv) + 0.5 * (F * W)));
  id["omega rhoHat^t = -rho f^t"] = maxAbsM(W * rhoHatRow.transpose() + Rho * Ft);
  id["beta = f omega f^t / 6"] = maxAbs(beta - (1.0 / 6.0) * (F * W * Ft).scalarEntry());
  {
    MatrixForm<double> twoBeta(3, 3, 7, 3);
    for (int i = 0; i < 3; ++i) twoBeta(i, i) = 2.0 * beta;
    id["omega f^t f = 2 beta 1"] = maxAbsM(W * Ft * F - twoBeta);
  }
  id["omega omega f^t = 0"] = maxAbsM(W * W * Ft);
  const auto etaF = (E * Ft).scalarEntry();
  const auto etaRhoHat = (E * rhoHatRow.transpose()).scalarEntry();
  id["f rho f^t eta f^t = -2 beta eta rhoHat^t"] =
      maxAbs(wedge((F * Rho * Ft).scalarEntry(), etaF) + 2.0 * wedge(beta, etaRhoHat));
  id["eta omega f^t eta f^t = +-12 beta vol"] =
      maxAbs(wedge((E * W * Ft).scalarEntry(), etaF) - (12.0 * sigma) * wedge(beta, vol));
  id["eta f^t eta f^t = 0"] = maxAbs(wedge(etaF, etaF));
  id["eta rhoHat^t eta f^t = +-2 vol f rhoHat^t"] =
      maxAbs(wedge(etaRhoHat, etaF) - (2.0 * sigma) * wedge(vol, (F * rhoHatRow.transpose()).scalarEntry()));
  id["eta rhoHat^t = -6 s vol"] = maxAbs(etaRhoHat + (6.0 * p.st.s) * vol);
  {
    const auto etaOmegaF = (detail::row(j.eta) * j.omega * detail::column(j.f)).scalarEntry();
    id["d(eta omega f^t) = 0"] = maxAbs(value(exteriorDerivative(etaOmegaF)));
  }
  {
    double r = 0.0;
    const auto EW = E * W;
    for (int i = 0; i < 3; ++i) r = std::max(r, maxAbs(value(exteriorDerivative(j.eta[i])) - EW(0, i)));
    id["d eta = eta omega"] = r;
  }
  id["rho = d omega + omega omega"] = maxAbsM(Rho - (value(exteriorDerivative(j.omega)) + W * W));
  id["eta rho = 0"] = maxAbsM(E * Rho);
  return p;
}

std::pair<double, double> secondDerivativeResidualP(const ChartP& chart, const Point<4>& x,
                                                    const std::array<double, 3>& u) {
  const auto frame = frameJets<3>(chart.model.metric, x, chart.model.orientation);
  const auto dual = dualityBases(frame, chart.branch);
  const auto j = pJets<2>(chart, frame, dual, u);
  return {maxAbs(value(exteriorDerivative(exteriorDerivative(j.phi)))),
          maxAbs(value(exteriorDerivative(exteriorDerivative(j.psi))))};
}

TorsionForms torsionPNumeric(const PPoint& p) { return torsionDecompose(p.standard, p.dphi, p.dpsi); }

TorsionPClosed torsionPClosed(const SingerThorpe& st, double lambda, double mu, Branch branch,
                              const std::array<Multivector, 3>& rhoHat) {
  const double sigma = sign(branch);
  const double s = st.s;
  const double l = lambda, m = mu;
  TorsionPClosed out;
  out.tau0 = sigma * 6.0 / (7.0 * l * m * m) * (m * m + 2.0 * s * l * l);

  std::array<Multivector, 3> fb;
  for (int i = 0; i < 3; ++i) fb[i] = Multivector::basis(7, {i});
  const auto eta = dualityForms(branch, 7, 3);
  const auto beta = wedge(fb[0], fb[1], fb[2]);
  Multivector starRhoF(7, 3), etaF(7, 3);
  for (int i = 0; i < 3; ++i) {
    const auto starRho = liftForm(hodge(restrictForm(rhoHat[i], 3, 4)), 7, 3);
    starRhoF += wedge(starRho, fb[i]);
    etaF += wedge(eta[i], fb[i]);
  }
  out.tau3 = (l * l) * starRhoF -
             (1.0 / 7.0) * ((m * m - 12.0 * s * l * l) * etaF - sigma * (30.0 * s * l * l * l * l / (m * m) - 6.0 * l * l) * beta);
  return out;
}

std::vector<std::array<double, 3>> fibreProbesP(int count, std::uint64_t seed) {
  const double radius = 0.9 * kExpChartRadius;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<double, 3>> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    std::array<double, 3> v{u(rng), u(rng), u(rng)};
    if (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] >= 1.0) continue;
    for (double& c : v) c *= radius;
    out.push_back(v);
  }
  return out;
}

}  // namespace g2frames
