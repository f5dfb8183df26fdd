#pragma once
// G2 structures on two 7-dimensional charts over a 4-dimensional model M.
//
// X: the bundle of (anti-)self-dual 2-forms, chart coordinates (a^1, a^2, a^3)
// at indices 0..2 and the base chart x at indices 3..6. A point of the fibre
// is a^i e^i. With f = da - a omegaP, h = (f^23, f^31, f^12), beta = f^123,
// vol = theta^1234 and r = |a|^2,
//
//     phi = lambda^3 beta -/+ lambda mu^2 eta f^t,
//     psi = mu^4 vol - lambda^2 mu^2 eta h^t,
//
// for radial profiles lambda(r), mu(r). The upper sign belongs to the
// self-dual bundle (Branch::Plus).
//
// P: the principal SO(3) bundle of oriented frames of the same 2-form bundle,
// chart coordinates u (exponential coordinates g = exp(check u)) at 0..2 and x
// at 3..6. The connection on the chart is omegaT = g^t omegaP g + g^t dg,
// f = hat(omegaT), eta is replaced by eta g and rhoT = g^t rhoP g. With
// constant lambda, mu,
//
//     phi = lambda^3 beta -/+ lambda mu^2 eta f^t,
//     psi = mu^4 vol - 1/2 lambda^2 mu^2 eta omegaT f^t.
//
// All forms are exact jets in the 7 chart variables. Values at a point are
// reported in the adapted coframe (f^1, f^2, f^3, theta'^1, ..., theta'^4),
// in which phi is the standard form of g2point.

#include <array>
#include <cmath>
#include <map>
#include <tuple>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "g2frames/frames4.hpp"
#include "g2frames/g2point.hpp"
#include "g2frames/models.hpp"
#include "g2frames/profile.hpp"

namespace g2frames {

/// A probe outside the chart or profile domain.
class ChartDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The base metric does not satisfy the duality assumption of a branch.
class DualityHypothesisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using Matrix7Rows = std::array<std::array<double, 7>, 7>;

namespace detail {

template <int Q>
JetForm<7, Q> coordinateForm(int i) {
  JetForm<7, Q> out(7, 1);
  out[i] = Jet<7, Q>(1.0);
  return out;
}

template <class S>
MatrixForm<S> scalarMatrix(const std::array<std::array<S, 3>, 3>& m, int dim) {
  MatrixForm<S> out(3, 3, dim, 0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = Form<S>::scalar(dim, m[i][j]);
  return out;
}

template <class S>
MatrixForm<S> column(const std::array<Form<S>, 3>& v) {
  MatrixForm<S> out(3, 1, v[0].dim(), v[0].degree());
  for (int i = 0; i < 3; ++i) out(i, 0) = v[i];
  return out;
}

template <class S>
MatrixForm<S> row(const std::array<Form<S>, 3>& v) {
  return MatrixForm<S>::row({v[0], v[1], v[2]});
}

/// Coefficients A = sin t/t, B = (1 - cos t)/t^2, C = (t - sin t)/t^3 of the
/// Rodrigues formula and of the right differential, as functions of
/// t^2 = |u|^2 (series near the origin).
template <class T>
std::array<T, 3> rodriguesCoefficients(const T& t2) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (value(t2) < 1e-2) {
    const T x = t2;
    const T a = 1.0 + x * (-1.0 / 6 + x * (1.0 / 120 + x * (-1.0 / 5040 + x * (1.0 / 362880))));
    const T b = 0.5 + x * (-1.0 / 24 + x * (1.0 / 720 + x * (-1.0 / 40320 + x * (1.0 / 3628800))));
    const T c = 1.0 / 6 + x * (-1.0 / 120 + x * (1.0 / 5040 + x * (-1.0 / 362880 + x * (1.0 / 39916800))));
    return {a, b, c};
  }
  const T t = sqrt(t2);
  const T s = sin(t), co = cos(t);
  const T it = reciprocal(t), it2 = reciprocal(t2);
  return {s * it, (1.0 - co) * it2, (t - s) * it2 * it};
}

template <class T>
using Mat3 = std::array<std::array<T, 3>, 3>;

template <class T>
Mat3<T> crossMatrix(const std::array<T, 3>& u) {
  Mat3<T> m;
  m[0] = {T(0.0), -1.0 * u[2], u[1]};
  m[1] = {u[2], T(0.0), -1.0 * u[0]};
  m[2] = {-1.0 * u[1], u[0], T(0.0)};
  return m;
}

template <class T>
Mat3<T> matmul(const Mat3<T>& a, const Mat3<T>& b) {
  Mat3<T> c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T s(0.0);
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      c[i][j] = s;
    }
  return c;
}

/// exp(check u) by the Rodrigues formula.
template <class T>
Mat3<T> rodrigues(const std::array<T, 3>& u) {
  const auto [A, B, C] = rodriguesCoefficients(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  (void)C;
  const auto U = crossMatrix(u);
  const auto U2 = matmul(U, U);
  Mat3<T> g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g[i][j] = A * U[i][j] + B * U2[i][j] + (i == j ? 1.0 : 0.0);
  return g;
}

/// Right differential: exp(-check u) d exp(check u) = check(J_r(u) du).
template <class T>
Mat3<T> rightJacobian(const std::array<T, 3>& u) {
  const auto [A, B, C] = rodriguesCoefficients(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
  (void)A;
  const auto U = crossMatrix(u);
  const auto U2 = matmul(U, U);
  Mat3<T> j;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) j[i][k] = -1.0 * B * U[i][k] + C * U2[i][k] + (i == k ? 1.0 : 0.0);
  return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Chart X

struct ChartX {
  ModelSpec model;
  Branch branch = Branch::Minus;
  Profile profile;
};

/// Validates the profile at r = 0 and records the chart data.
ChartX buildChartX(const ModelSpec& model, Branch branch, const Profile& profile);

/// Canonical forms on X as order-Q jets in the chart basis.
template <int Q>
struct XJets {
  std::array<Jet<7, Q>, 3> a;
  Jet<7, Q> r, lambda, mu;
  std::array<JetForm<7, Q>, 3> eta, f, h;
  std::array<JetForm<7, Q>, 4> theta;
  JetForm<7, Q> beta, vol, phi, psi;
  JetForm<7, Q> tautological;  // eta a^t
  MatrixForm<Jet<7, Q>> omegaP;
  Matrix7Rows adapted{};  // chart components of f^1..3, theta^1..4
};

template <int Q>
XJets<Q> xJets(const ChartX& chart, const FrameJets<Q + 1>& frame, const DualityJets<Q + 1>& dual,
               const std::array<double, 3>& a) {
  using J = Jet<7, Q>;
  XJets<Q> out;
  for (int i = 0; i < 3; ++i) out.a[i] = J::variable(i, a[i]);
  out.r = out.a[0] * out.a[0] + out.a[1] * out.a[1] + out.a[2] * out.a[2];
  if (!chart.profile.contains(out.r.value()))
    throw ChartDomainError("fibre point with r = " + std::to_string(out.r.value()) + " is outside the profile domain " +
                           chart.profile.describe() + " (needs r < " + std::to_string(chart.profile.rMax()) + ")");
  std::tie(out.lambda, out.mu) = chart.profile.eval(out.r);

  for (int i = 0; i < 3; ++i) out.eta[i] = liftForm<7, Q>(dual.eta[i], 3);
  for (int b = 0; b < 4; ++b) out.theta[b] = liftForm<7, Q>(frame.theta[b], 3);
  out.omegaP = liftMatrix<7, Q>(dual.omegaP, 3);
  for (int j = 0; j < 3; ++j) {
    JetForm<7, Q> fj = detail::coordinateForm<Q>(j);
    for (int i = 0; i < 3; ++i) fj -= out.a[i] * out.omegaP(i, j);
    out.f[j] = fj;
  }
  out.h = {wedge(out.f[1], out.f[2]), wedge(out.f[2], out.f[0]), wedge(out.f[0], out.f[1])};
  out.beta = wedge(out.f[0], out.f[1], out.f[2]);
  out.vol = wedge(out.theta[0], out.theta[1], out.theta[2], out.theta[3]);

  const double sigma = sign(chart.branch);
  const J& l = out.lambda;
  const J& m = out.mu;
  JetForm<7, Q> etaF(7, 3), etaH(7, 4);
  out.tautological = JetForm<7, Q>(7, 2);
  for (int i = 0; i < 3; ++i) {
    etaF += wedge(out.eta[i], out.f[i]);
    etaH += wedge(out.eta[i], out.h[i]);
    out.tautological += out.a[i] * out.eta[i];
  }
  out.phi = (l * l * l) * out.beta - sigma * ((l * m * m) * etaF);
  out.psi = (m * m * m * m) * out.vol - (l * l * m * m) * etaH;

  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 7; ++c) out.adapted[i][c] = out.f[i][c].value();
  for (int b = 0; b < 4; ++b)
    for (int c = 0; c < 7; ++c) out.adapted[3 + b][c] = out.theta[b][c].value();
  return out;
}

/// Everything evaluated at one point (x, a) of X, in the adapted basis.
struct XPoint {
  Point<4> x{};
  std::array<double, 3> a{};
  double r = 0.0;
  Profile::Values profile{};
  G2Structure standard;         // linear model at (lambda(r), mu(r))
  Multivector phi, psi;         // adapted basis
  Multivector dphi, dpsi;       // jet differentiation
  Multivector dphiSystem, dpsiSystem;  // closed structure system
  std::array<std::array<Multivector, 3>, 3> rhoP;  // adapted basis
  SingerThorpe st;
  Matrix3 opposite = Matrix3::Zero();  // rho_B^i = sum_j opposite(i, j) e_opp^j
  double phiResidual = 0.0;            // |phi - standard phi|
  double psiResidual = 0.0;            // |psi - standard psi|
  double metricResidual = 0.0;         // |metricFromPhi - diag(lambda^2, mu^2)|
  double drResidual = 0.0;             // |dr - 2 f a^t|
  double tautologicalResidual = 0.0;   // |d(eta a^t) - eta f^t|
  double betaResidual = 0.0;           // |d beta - h rho a^t|
  double systemResidualPhi = 0.0;      // |dphi - dphiSystem|
  double systemResidualPsi = 0.0;
};

XPoint evaluateX(const ChartX& chart, const Point<4>& x, const std::array<double, 3>& a);

/// |d dphi| and |d dpsi| from order-2 jets (exactness check).
std::pair<double, double> secondDerivativeResidualX(const ChartX& chart, const Point<4>& x,
                                                    const std::array<double, 3>& a);

/// Torsion forms of the numeric (dphi, dpsi).
TorsionForms torsionXNumeric(const XPoint& p);

/// Closed-form torsion at a point: tau0 = 0,
/// tau1 = 2/(3 lambda^2 mu^4) (d(lambda^2 mu^4)/dr - s lambda^4 mu^2) dr,
/// tau2 = -/+ (d(mu^2/lambda^2)/dr - 2s) (4 lambda^3/(3 mu^2) h a^t +/- 2 lambda/3 eta a^t),
/// tau3 = -/+ lambda^2 f check(rho_B) a^t.
/// Requires W+ = 0 on the self-dual branch and W- = 0 on the anti-self-dual
/// branch (norm at most hypothesisTol).
TorsionForms torsionXClosed(const XPoint& p, const Profile& profile, Branch branch, double hypothesisTol = 1e-7);

/// Normalized scalar curvature s read off the block acting on the branch.
double branchS(const SingerThorpe& st, Branch branch);

// ---------------------------------------------------------------------------
// Chart P

struct ChartP {
  ModelSpec model;
  Branch branch = Branch::Minus;
  double lambda = 1.0;
  double mu = 1.0;
};

inline constexpr double kExpChartRadius = M_PI - 0.1;

ChartP buildChartP(const ModelSpec& model, Branch branch, double lambda, double mu);

template <int Q>
struct PJets {
  std::array<Jet<7, Q>, 3> u;
  detail::Mat3<Jet<7, Q>> g;
  MatrixForm<Jet<7, Q>> omega;      // omegaT
  MatrixForm<Jet<7, Q - 1>> rho;    // rhoT
  std::array<JetForm<7, Q>, 3> eta, f;
  std::array<JetForm<7, Q>, 4> theta;
  JetForm<7, Q> beta, vol, phi, psi;
};

template <int Q>
  requires(Q >= 1)
PJets<Q> pJets(const ChartP& chart, const FrameJets<Q + 1>& frame, const DualityJets<Q + 1>& dual,
               const std::array<double, 3>& u) {
  using J = Jet<7, Q>;
  using S = Jet<7, Q - 1>;
  PJets<Q> out;
  for (int i = 0; i < 3; ++i) out.u[i] = J::variable(i, u[i]);
  out.g = detail::rodrigues(out.u);
  const auto jr = detail::rightJacobian(out.u);

  const auto G = detail::scalarMatrix(out.g, 7);
  const auto Gt = G.transpose();
  // g^t dg = check(J_r du)
  std::array<JetForm<7, Q>, 3> mc;
  for (int i = 0; i < 3; ++i) {
    mc[i] = JetForm<7, Q>(7, 1);
    for (int k = 0; k < 3; ++k) mc[i][k] = jr[i][k];
  }
  out.omega = Gt * liftMatrix<7, Q>(dual.omegaP, 3) * G + check(detail::row(mc));

  detail::Mat3<S> gLow;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gLow[i][j] = out.g[i][j].template truncate<Q - 1>();
  const auto GL = detail::scalarMatrix(gLow, 7);
  out.rho = GL.transpose() * liftMatrix<7, Q - 1>(dual.rhoP, 3) * GL;

  std::array<JetForm<7, Q>, 3> eta0;
  for (int i = 0; i < 3; ++i) eta0[i] = liftForm<7, Q>(dual.eta[i], 3);
  const auto etaG = detail::row(eta0) * G;
  for (int i = 0; i < 3; ++i) out.eta[i] = etaG(0, i);
  const auto fr = hat(out.omega);
  for (int i = 0; i < 3; ++i) out.f[i] = fr(0, i);
  for (int b = 0; b < 4; ++b) out.theta[b] = liftForm<7, Q>(frame.theta[b], 3);
  out.beta = wedge(out.f[0], out.f[1], out.f[2]);
  out.vol = wedge(out.theta[0], out.theta[1], out.theta[2], out.theta[3]);

  const double sigma = sign(chart.branch);
  const double l = chart.lambda, m = chart.mu;
  JetForm<7, Q> etaF(7, 3);
  for (int i = 0; i < 3; ++i) etaF += wedge(out.eta[i], out.f[i]);
  const auto etaOmegaF = (detail::row(out.eta) * out.omega * detail::column(out.f)).scalarEntry();
  out.phi = (l * l * l) * out.beta - (sigma * l * m * m) * etaF;
  out.psi = (m * m * m * m) * out.vol - (0.5 * l * l * m * m) * etaOmegaF;
  return out;
}

/// Everything evaluated at one point (x, u) of P, in the adapted basis.
struct PPoint {
  Point<4> x{};
  std::array<double, 3> u{};
  Eigen::Matrix3d g = Eigen::Matrix3d::Identity();
  Eigen::Matrix4d frameRotation = Eigen::Matrix4d::Identity();  // theta' = theta R
  std::string frameRotationKind;                               // which quaternion action realizes g
  G2Structure standard;
  Multivector phi, psi, dphi, dpsi;  // adapted basis
  std::array<Multivector, 3> rhoHat;  // hat(rhoT), adapted basis
  SingerThorpe st;
  double phiResidual = 0.0;
  double psiResidual = 0.0;
  double metricResidual = 0.0;
  double horizontalResidual = 0.0;  // vertical components of rhoHat
  std::map<std::string, double> identities;  // algebraic and differential identities on P
};

PPoint evaluateP(const ChartP& chart, const Point<4>& x, const std::array<double, 3>& u);

/// |d dphi| and |d dpsi| from order-2 jets.
std::pair<double, double> secondDerivativeResidualP(const ChartP& chart, const Point<4>& x,
                                                    const std::array<double, 3>& u);

TorsionForms torsionPNumeric(const PPoint& p);

struct TorsionPClosed {
  double tau0 = 0.0;
  Multivector tau3{7, 3};
};

/// tau0 = +/- 6/(7 lambda mu^2) (mu^2 + 2 s lambda^2) and
/// tau3 = lambda^2 (*_M rhoHat) f^t - 1/7 ((mu^2 - 12 s lambda^2) eta f^t -/+ (30 s lambda^4/mu^2 - 6 lambda^2) beta).
TorsionPClosed torsionPClosed(const SingerThorpe& st, double lambda, double mu, Branch branch,
                              const std::array<Multivector, 3>& rhoHat);

/// Random fibre probes: |a| <= min(3, sqrt(0.9 rMax)) for X, |u| < 0.9 kExpChartRadius for P.
std::vector<std::array<double, 3>> fibreProbesX(const Profile& p, int count, std::uint64_t seed);
std::vector<std::array<double, 3>> fibreProbesP(int count, std::uint64_t seed);

}  // namespace g2frames
