#include "g2frames/g2point.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace g2frames {

namespace {

constexpr int kV1 = 0, kV2 = 1, kV3 = 2;  // f^1..f^3
constexpr int kE4 = 3, kE5 = 4, kE6 = 5, kE7 = 6;

Eigen::VectorXd toVector(const Multivector& a) {
  Eigen::VectorXd v(a.size());
  for (int i = 0; i < a.size(); ++i) v[i] = a[i];
  return v;
}

Multivector fromVector(const Eigen::VectorXd& v, int dim, int degree) {
  Multivector a(dim, degree);
  for (int i = 0; i < a.size(); ++i) a[i] = v[i];
  return a;
}

Multivector oneForm(int i) { return Multivector::basis(7, {i}); }

std::array<double, 7> adaptedScales(double lambda, double mu) {
  return {lambda, lambda, lambda, mu, mu, mu, mu};
}

// Projectors for the standard structure (lambda = mu = 1), where the adapted
// basis is orthonormal and all maps below are Euclidean-symmetric.
struct Projectors {
  G2Structure unit;
  double kappa14 = 0.0;
  Eigen::MatrixXd w2;         // 21x21 projector onto W2
  Eigen::MatrixXd w3;         // 35x35 projector onto W3
  Eigen::MatrixXd tau1Solve;  // 7x21 least-squares inverse of v -> v ^ psi

  explicit Projectors(Branch branch) : unit(standardPhi(1.0, 1.0, branch)) {
    // Lambda^2 = W7 + W14 as eigenspaces of tau -> *(tau ^ phi).
    Eigen::MatrixXd t(21, 21);
    for (int j = 0; j < 21; ++j) {
      Multivector e(7, 2);
      e[j] = 1.0;
      t.col(j) = toVector(hodge(wedge(e, unit.phi)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (t + t.transpose()));
    std::map<long long, int> multiplicity;
    for (int i = 0; i < 21; ++i) ++multiplicity[std::llround(eig.eigenvalues()[i] * 1e6)];
    for (const auto& [key, count] : multiplicity) {
      if (count == 14) kappa14 = static_cast<double>(key) * 1e-6;
    }
    if (kappa14 == 0.0) throw std::logic_error("no 14-dimensional eigenspace in Lambda^2");
    kappa14 = std::round(kappa14);
    w2 = Eigen::MatrixXd::Zero(21, 21);
    for (int i = 0; i < 21; ++i) {
      if (std::abs(eig.eigenvalues()[i] - kappa14) < 1e-6) w2 += eig.eigenvectors().col(i) * eig.eigenvectors().col(i).transpose();
    }

    // Lambda^3 = W1 + W7 + W27 with W1 = <phi>, W7 = {*(alpha ^ phi)}.
    Eigen::MatrixXd span(35, 8);
    span.col(0) = toVector(unit.phi);
    for (int i = 0; i < 7; ++i) span.col(1 + i) = toVector(hodge(wedge(oneForm(i), unit.phi)));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(span);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(35, 8);
    w3 = Eigen::MatrixXd::Identity(35, 35) - q * q.transpose();

    Eigen::MatrixXd l1(21, 7);
    for (int i = 0; i < 7; ++i) l1.col(i) = toVector(wedge(oneForm(i), unit.psi));
    tau1Solve = (l1.transpose() * l1).ldlt().solve(l1.transpose());
  }
};

const Projectors& projectors(Branch branch) {
  static const Projectors plus(Branch::Plus);
  static const Projectors minus(Branch::Minus);
  return branch == Branch::Plus ? plus : minus;
}

}  // namespace

std::array<Multivector, 3> dualityForms(Branch branch, int dim, int offset) {
  const double s = sign(branch);
  const int a = offset, b = offset + 1, c = offset + 2, d = offset + 3;
  return {Multivector::basis(dim, {a, b}) + s * Multivector::basis(dim, {c, d}),
          Multivector::basis(dim, {a, c}) - s * Multivector::basis(dim, {b, d}),
          Multivector::basis(dim, {a, d}) + s * Multivector::basis(dim, {b, c})};
}

G2Structure standardPhi(double lambda, double mu, Branch branch) {
  if (!(lambda > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("standardPhi: lambda and mu must be positive (got " + std::to_string(lambda) + ", " +
                                std::to_string(mu) + ")");
  const auto e = dualityForms(branch, 7, kE4);
  const std::array<Multivector, 3> f{oneForm(kV1), oneForm(kV2), oneForm(kV3)};
  const double s = sign(branch);

  G2Structure g;
  g.lambda = lambda;
  g.mu = mu;
  g.branch = branch;
  g.phi = std::pow(lambda, 3) * Multivector::basis(7, {kV1, kV2, kV3});
  for (int i = 0; i < 3; ++i) g.phi -= (s * lambda * mu * mu) * wedge(f[i], e[i]);

  const double l2 = lambda * lambda, m2 = mu * mu;
  g.psi = (m2 * m2) * Multivector::basis(7, {kE4, kE5, kE6, kE7});
  g.psi -= (l2 * m2) * (wedge(e[0], Multivector::basis(7, {kV2, kV3})) +
                        wedge(e[1], Multivector::basis(7, {kV3, kV1})) +
                        wedge(e[2], Multivector::basis(7, {kV1, kV2})));
  g.metricDiag = {l2, l2, l2, m2, m2, m2, m2};
  g.m = l2 * lambda * m2 * m2;
  g.orientation = Multivector::basis(7, {0, 1, 2, 3, 4, 5, 6});
  return g;
}

MetricRecovery metricFromPhi(const Multivector& phi, const Multivector& orientation) {
  if (phi.dim() != 7 || phi.degree() != 3) throw DimensionError("metricFromPhi expects a 3-form on R^7");
  if (orientation.dim() != 7 || orientation.degree() != 7 || orientation[0] == 0.0)
    throw DimensionError("metricFromPhi expects a non-zero orientation 7-form");
  std::array<Multivector, 7> contractions;
  for (int i = 0; i < 7; ++i) {
    std::array<double, 7> v{};
    v[i] = 1.0;
    contractions[i] = interior(v, phi);
  }
  Matrix7 b;
  for (int i = 0; i < 7; ++i) {
    for (int j = i; j < 7; ++j) {
      b(i, j) = wedge(contractions[i], contractions[j], phi)[0] / orientation[0];
      b(j, i) = b(i, j);
    }
  }
  Eigen::FullPivLU<Matrix7> lu(b);
  lu.setThreshold(1e-12);
  if (lu.rank() < 7) throw DegenerateFormError(static_cast<int>(lu.rank()));

  const double det = b.determinant();
  const double mRaw = std::copysign(std::pow(std::abs(det) / std::pow(6.0, 7), 1.0 / 9.0), det);
  MetricRecovery out;
  out.gram = b / (6.0 * mRaw);
  out.m = std::abs(mRaw);
  out.identitySign = mRaw > 0 ? 1 : -1;
  Eigen::SelfAdjointEigenSolver<Matrix7> eig(out.gram);
  for (int i = 0; i < 7; ++i) (eig.eigenvalues()[i] > 0 ? out.positive : out.negative)++;
  return out;
}

MetricRecovery metricFromPhi(const Multivector& phi) {
  return metricFromPhi(phi, Multivector::basis(7, {0, 1, 2, 3, 4, 5, 6}));
}

Multivector toOrthonormal(const G2Structure& s, const Multivector& a) {
  const auto sc = adaptedScales(s.lambda, s.mu);
  std::array<double, 7> inv;
  for (int i = 0; i < 7; ++i) inv[i] = 1.0 / sc[i];
  return rescale(a, inv);
}

Multivector fromOrthonormal(const G2Structure& s, const Multivector& a) {
  return rescale(a, adaptedScales(s.lambda, s.mu));
}

double w2Eigenvalue(Branch branch) { return projectors(branch).kappa14; }

Multivector projectW2(const G2Structure& s, const Multivector& tau2) {
  const auto& p = projectors(s.branch);
  return fromOrthonormal(s, fromVector(p.w2 * toVector(toOrthonormal(s, tau2)), 7, 2));
}

Multivector projectW3(const G2Structure& s, const Multivector& tau3) {
  const auto& p = projectors(s.branch);
  return fromOrthonormal(s, fromVector(p.w3 * toVector(toOrthonormal(s, tau3)), 7, 3));
}

std::array<double, 4> TorsionForms::norms() const {
  return {std::abs(tau0), norm(tau1, metricDiag), norm(tau2, metricDiag), norm(tau3, metricDiag)};
}

TorsionForms torsionDecompose(const G2Structure& s, const Multivector& dphi, const Multivector& dpsi) {
  if (dphi.dim() != 7 || dphi.degree() != 4 || dpsi.dim() != 7 || dpsi.degree() != 5)
    throw DimensionError("torsionDecompose expects a 4-form and a 5-form on R^7");
  const auto& p = projectors(s.branch);
  const auto& phi0 = p.unit.phi;
  const auto& psi0 = p.unit.psi;
  const auto dphiN = toOrthonormal(s, dphi);
  const auto dpsiN = toOrthonormal(s, dpsi);

  TorsionForms t;
  t.metricDiag = s.metricDiag;
  t.tau0 = wedge(dphiN, phi0)[0] / 7.0;

  const Multivector tau1 = fromVector(p.tau1Solve * toVector(dpsiN), 7, 1);
  const Multivector rest = dpsiN - wedge(tau1, psi0);
  const Multivector tau2 = fromVector(p.w2 * toVector(hodge(rest)), 7, 2) * (1.0 / p.kappa14);
  const Multivector raw3 = hodge(dphiN - t.tau0 * psi0 - 0.75 * wedge(tau1, phi0));
  const Multivector tau3 = fromVector(p.w3 * toVector(raw3), 7, 3);

  t.residualPhi = norm(dphiN - (t.tau0 * psi0 + 0.75 * wedge(tau1, phi0) + hodge(tau3)));
  t.residualPsi = norm(dpsiN - (wedge(tau1, psi0) + wedge(tau2, phi0)));
  t.w2Membership = norm(wedge(tau2, phi0) - p.kappa14 * hodge(tau2));
  t.w3Membership = std::max(norm(wedge(tau3, phi0)), norm(wedge(tau3, psi0)));

  t.tau1 = fromOrthonormal(s, tau1);
  t.tau2 = fromOrthonormal(s, tau2);
  t.tau3 = fromOrthonormal(s, tau3);
  return t;
}

std::pair<Multivector, Multivector> torsionReconstruct(const G2Structure& s, const TorsionForms& t) {
  const auto& p = projectors(s.branch);
  const auto tau1 = toOrthonormal(s, t.tau1);
  const auto tau2 = toOrthonormal(s, t.tau2);
  const auto tau3 = toOrthonormal(s, t.tau3);
  const Multivector dphi = t.tau0 * p.unit.psi + 0.75 * wedge(tau1, p.unit.phi) + hodge(tau3);
  const Multivector dpsi = wedge(tau1, p.unit.psi) + wedge(tau2, p.unit.phi);
  return {fromOrthonormal(s, dphi), fromOrthonormal(s, dpsi)};
}

TorsionClass classify(const TorsionForms& t, double tol) { return classify(t.norms(), tol); }

TorsionClass classify(const std::array<double, 4>& n, double tol) {
  TorsionClass c;
  c.w0 = n[0] > tol;
  c.w1 = n[1] > tol;
  c.w2 = n[2] > tol;
  c.w3 = n[3] > tol;
  c.parallel = !(c.w0 || c.w1 || c.w2 || c.w3);
  c.calibrated = !(c.w0 || c.w1 || c.w3);
  c.cocalibrated = !(c.w1 || c.w2);
  c.nearlyParallelCandidate = c.w0 && !c.w1 && !c.w2 && !c.w3;

  if (c.parallel) {
    c.label = "parallel";
    return c;
  }
  std::ostringstream os;
  const int count = c.w0 + c.w1 + c.w2 + c.w3;
  if (c.nearlyParallelCandidate) os << "nearly parallel candidate; ";
  os << (count == 1 ? "pure " : "");
  bool first = true;
  const std::array<bool, 4> on{c.w0, c.w1, c.w2, c.w3};
  for (int i = 0; i < 4; ++i) {
    if (!on[i]) continue;
    os << (first ? "" : "+") << "W" << i;
    first = false;
  }
  os << "; " << (c.cocalibrated ? "cocalibrated" : "not cocalibrated") << "; "
     << (c.calibrated ? "calibrated" : "not calibrated");
  c.label = os.str();
  return c;
}

}  // namespace g2frames
