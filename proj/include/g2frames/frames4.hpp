#pragma once
// Moving frames on a 4-dimensional chart.
//
// Conventions. The coframe is theta^a = sum_mu E(a, mu) dx^mu with E the
// transposed Cholesky factor of g, so theta is orientation-positive. The
// Levi-Civita matrix omega is the skew 4x4 matrix of 1-forms with
//
//     d theta + theta omega = 0   (theta a row, matrix-of-forms product),
//
// i.e. d theta^j = -sum_i theta^i ^ omega(i, j), and the curvature is
// rho = d omega + omega omega. On a space of constant curvature K this gives
// rho(a, b) = K theta^a ^ theta^b.
//
// On the 2-forms the frame induces eta = (e^1, e^2, e^3) with
// e^1 = theta^12 +- theta^34, e^2 = theta^13 -+ theta^24,
// e^3 = theta^14 +- theta^23 (norm sqrt 2 and *e^i = +-e^i). The induced
// connection satisfies d eta = eta omegaP and its curvature is
// rhoP = d omegaP + omegaP omegaP, so that eta rhoP = 0.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "g2frames/exterior.hpp"
#include "g2frames/fields.hpp"
#include "g2frames/g2point.hpp"
#include "g2frames/matrix_form.hpp"

namespace g2frames {

using Matrix3 = Eigen::Matrix3d;

class NonPositiveMetricError : public std::invalid_argument {
 public:
  NonPositiveMetricError(const Point<4>& x, double pivot)
      : std::invalid_argument("metric is not positive definite at (" + std::to_string(x[0]) + ", " +
                              std::to_string(x[1]) + ", " + std::to_string(x[2]) + ", " + std::to_string(x[3]) +
                              "): Cholesky pivot " + std::to_string(pivot)),
        point_(x) {}
  const Point<4>& point() const { return point_; }

 private:
  Point<4> point_;
};

/// Jet data of the orthonormal coframe, Levi-Civita connection and curvature
/// at one chart point, computed from order-P jets of the metric.
template <int P>
struct FrameJets {
  static_assert(P >= 2, "curvature needs second derivatives of the metric");
  Point<4> x{};
  int orientation = 1;
  Matrix4<Jet<4, P>> E;     // theta^a = E(a, mu) dx^mu
  Matrix4<Jet<4, P>> Einv;  // dx^mu = Einv(mu, a) theta^a
  std::array<JetForm<4, P>, 4> theta;
  MatrixForm<Jet<4, P - 1>> omega;
  MatrixForm<Jet<4, P - 2>> rho;
};

namespace detail {

/// Coefficients of a 2-form (chart basis) in the theta basis.
template <int D, int P, class J>
std::array<std::array<J, 4>, 4> frameComponents2(const JetForm<D, P>& a, const Matrix4<J>& einv) {
  std::array<std::array<J, 4>, 4> c{};
  for (int b = 0; b < 4; ++b)
    for (int g = 0; g < 4; ++g) c[b][g] = J(0.0);
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = mu + 1; nu < 4; ++nu) {
      const auto coef = a.get({mu, nu}).template truncate<J::kOrder>();
      for (int b = 0; b < 4; ++b) {
        for (int g = b + 1; g < 4; ++g) {
          c[b][g] += coef * (einv[mu][b] * einv[nu][g] - einv[mu][g] * einv[nu][b]);
        }
      }
    }
  }
  for (int b = 0; b < 4; ++b)
    for (int g = 0; g < b; ++g) c[b][g] = -c[g][b];
  return c;
}

template <int Q, int P>
Matrix4<Jet<4, Q>> truncateMatrix(const Matrix4<Jet<4, P>>& m) {
  Matrix4<Jet<4, Q>> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = m[i][j].template truncate<Q>();
  return out;
}

}  // namespace detail

/// Orthonormal coframe, Levi-Civita connection and curvature at x.
/// orientation = -1 replaces theta^4 by -theta^4.
template <int P>
FrameJets<P> frameJets(const MetricField& metric, const Point<4>& x, int orientation = 1) {
  using J = Jet<4, P>;
  FrameJets<P> out;
  out.x = x;
  out.orientation = orientation;
  const auto g = metric.jet<P>(x);

  // Cholesky g = L L^T on jets.
  Matrix4<J> L{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) L[i][j] = J(0.0);
  for (int j = 0; j < 4; ++j) {
    J d = g[j][j];
    for (int k = 0; k < j; ++k) d -= L[j][k] * L[j][k];
    if (!(d.value() > 0.0)) throw NonPositiveMetricError(x, d.value());
    L[j][j] = sqrt(d);
    const J inv = reciprocal(L[j][j]);
    for (int i = j + 1; i < 4; ++i) {
      J v = g[i][j];
      for (int k = 0; k < j; ++k) v -= L[i][k] * L[j][k];
      L[i][j] = v * inv;
    }
  }
  // L^{-1} (lower triangular) by forward substitution.
  Matrix4<J> Li{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) Li[i][j] = J(0.0);
  for (int i = 0; i < 4; ++i) {
    const J inv = reciprocal(L[i][i]);
    Li[i][i] = inv;
    for (int j = 0; j < i; ++j) {
      J v(0.0);
      for (int k = j; k < i; ++k) v += L[i][k] * Li[k][j];
      Li[i][j] = -1.0 * v * inv;
    }
  }
  for (int a = 0; a < 4; ++a) {
    const double sa = (a == 3 && orientation < 0) ? -1.0 : 1.0;
    for (int mu = 0; mu < 4; ++mu) {
      out.E[a][mu] = sa * L[mu][a];
      out.Einv[mu][a] = sa * Li[a][mu];
    }
  }
  for (int a = 0; a < 4; ++a) {
    out.theta[a] = JetForm<4, P>(4, 1);
    for (int mu = 0; mu < 4; ++mu) out.theta[a][mu] = out.E[a][mu];
  }

  // d theta^a = sum_{b<g} c^a_{bg} theta^{bg}; T = -c; Gamma_ijk = (T_j,ik + T_i,kj - T_k,ji)/2.
  const auto einv1 = detail::truncateMatrix<P - 1>(out.Einv);
  std::array<std::array<std::array<Jet<4, P - 1>, 4>, 4>, 4> c;
  for (int a = 0; a < 4; ++a) c[a] = detail::frameComponents2(exteriorDerivative(out.theta[a]), einv1);
  out.omega = MatrixForm<Jet<4, P - 1>>(4, 4, 4, 1);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      JetForm<4, P - 1> w(4, 1);
      for (int k = 0; k < 4; ++k) {
        const Jet<4, P - 1> gamma = -0.5 * (c[j][i][k] + c[i][k][j] - c[k][j][i]);
        const auto th = truncate<P - 1>(out.theta[k]);
        for (int mu = 0; mu < 4; ++mu) w[mu] += gamma * th[mu];
      }
      out.omega(i, j) = w;
    }
  }
  const auto w1 = truncate<P - 2>(out.omega);
  out.rho = exteriorDerivative(out.omega) + w1 * w1;
  return out;
}

/// Value of a chart form at x rewritten in the theta basis.
template <int P>
Multivector inFrame(const FrameJets<P>& f, const Multivector& a) {
  std::array<double, 16> inv;
  for (int mu = 0; mu < 4; ++mu)
    for (int b = 0; b < 4; ++b) inv[mu * 4 + b] = f.Einv[mu][b].value();
  return changeBasis(a, inv);
}

/// SD (Branch::Plus) or ASD (Branch::Minus) duality forms of a frame, the
/// induced connection and its curvature.
template <int P>
struct DualityJets {
  Branch branch = Branch::Plus;
  std::array<JetForm<4, P>, 3> eta;
  MatrixForm<Jet<4, P - 1>> omegaP;
  MatrixForm<Jet<4, P - 2>> rhoP;
};

template <int P>
DualityJets<P> dualityBases(const FrameJets<P>& f, Branch branch) {
  DualityJets<P> out;
  out.branch = branch;
  const auto e = dualityForms(branch, 4, 0);  // constant in the theta basis
  for (int i = 0; i < 3; ++i) {
    JetForm<4, P> form(4, 2);
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) {
        const double cab = e[i].get({a, b});
        if (cab != 0.0) form += cab * wedge(f.theta[a], f.theta[b]);
      }
    out.eta[i] = form;
  }
  // nabla theta^a = -sum_c omega(a, c) theta^c; omegaP(j, i) = <nabla e^i, e^j> / 2.
  out.omegaP = MatrixForm<Jet<4, P - 1>>(3, 3, 4, 1);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      JetForm<4, P - 1> w(4, 1);
      for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
          const double cab = e[i].get({a, b});
          if (cab == 0.0) continue;
          for (int k = 0; k < 4; ++k) {
            const double p1 = e[j].get({k, b});
            const double p2 = e[j].get({a, k});
            if (p1 != 0.0) w -= (0.5 * cab * p1) * f.omega(a, k);
            if (p2 != 0.0) w -= (0.5 * cab * p2) * f.omega(b, k);
          }
        }
      }
      out.omegaP(j, i) = w;
    }
  }
  const auto w1 = truncate<P - 2>(out.omegaP);
  out.rhoP = exteriorDerivative(out.omegaP) + w1 * w1;
  return out;
}

struct SingerThorpe {
  Matrix3 A = Matrix3::Zero();
  Matrix3 B = Matrix3::Zero();
  Matrix3 C = Matrix3::Zero();
  Matrix3 Wplus = Matrix3::Zero();
  Matrix3 Wminus = Matrix3::Zero();
  double s = 0.0;
  double scal = 0.0;
};

/// Components <alpha, e^j> / 2 of a frame-basis 2-form against a duality
/// basis of norm sqrt 2.
std::array<double, 3> dualityComponents(const Multivector& alphaInFrame, Branch branch);

/// Global sign of the pairing from curvature rows to (A, B, C), fixed by
/// requiring s = +1 on the unit round 4-sphere.
int curvatureSign();

/// A = sign (-a~), B = sign b~~, C = sign c~ with a~ = <rho+^i, e+^j>/2,
/// b~~ = <rho+^i, e-^j>/2, c~ = <rho-^i, e-^j>/2, where rho^i = hat(rhoP)^i
/// in the frame basis. scal is computed from the 4x4 curvature.
SingerThorpe singerThorpe(const std::array<Multivector, 3>& rhoPlusRows, const std::array<Multivector, 3>& rhoMinusRows,
                          double scal);

struct CurvatureFlags {
  bool einstein = false;
  bool sd = false;
  bool asd = false;
  bool scalarFlat = false;
  int sSign = 0;
  double s = 0.0;
};

CurvatureFlags predicates(const SingerThorpe& st, double tol);

/// Everything the frame calculus produces at one point, with residuals.
struct PointGeometry {
  Point<4> x{};
  SingerThorpe st;
  Matrix4<double> sectional{};  // K(a, b) from rho(a, b) in the theta basis
  double cartanResidual = 0.0;   // |d theta + theta omega|
  double omegaSkew = 0.0;
  double rhoSkew = 0.0;
  double dualityResidual = 0.0;  // max over branches of |d eta - eta omegaP|
  double bianchiResidual = 0.0;  // max over branches of |eta rhoP|
  double asymmetryA = 0.0;
  double asymmetryC = 0.0;
  double traceGap = 0.0;  // max(|tr A - tr C|, |tr A - scal/4|)
};

PointGeometry analyzePoint(const MetricField& metric, const Point<4>& x, int orientation = 1);

/// Scalar curvature from the 4x4 curvature matrix (values in the theta basis).
double scalarCurvature(const std::array<std::array<Multivector, 4>, 4>& rhoInFrame);

/// Frame-basis rows hat(rhoP) of a duality curvature.
template <int P>
std::array<Multivector, 3> curvatureRows(const FrameJets<P>& f, const DualityJets<P>& d) {
  const auto row = hat(value(d.rhoP));
  return {inFrame(f, row(0, 0)), inFrame(f, row(0, 1)), inFrame(f, row(0, 2))};
}

/// Singer-Thorpe blocks straight from the frame jets.
template <int P>
SingerThorpe singerThorpe(const FrameJets<P>& f) {
  const auto plus = dualityBases(f, Branch::Plus);
  const auto minus = dualityBases(f, Branch::Minus);
  std::array<std::array<Multivector, 4>, 4> rho;
  const auto rv = value(f.rho);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) rho[a][b] = inFrame(f, rv(a, b));
  return singerThorpe(curvatureRows(f, plus), curvatureRows(f, minus), scalarCurvature(rho));
}

/// Opposite-duality block in the curvature of the given branch, as a 3x3
/// matrix of frame-basis 2-forms rows: rho_B^i = sum_j M(i, j) e_opp^j.
Matrix3 oppositeBlock(const std::array<Multivector, 3>& rows, Branch branch);

}  // namespace g2frames
