#pragma once
// Radial profiles lambda(r), mu(r) for the G2 structures on the bundles of
// 2-forms, with r = |a|^2 the squared fibre radius.

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "g2frames/jet.hpp"

namespace g2frames {

class ProfileDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Natural cubic spline through (x_k, y_k), evaluable on jets.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  template <class T>
  T operator()(const T& r) const {
    const double v = value(r);
    std::size_t k = 0;
    while (k + 2 < x_.size() && v > x_[k + 1]) ++k;
    const T t = r - x_[k];
    return y_[k] + t * (b_[k] + t * (c_[k] + t * d_[k]));
  }

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  const std::vector<double>& knots() const { return x_; }
  const std::vector<double>& values() const { return y_; }

 private:
  std::vector<double> x_, y_, b_, c_, d_;
};

struct Profile {
  enum class Kind { BryantSalamon, Constant, TauTwoZero, PowerLaw, Table };

  Kind kind = Kind::Constant;
  // Bryant-Salamon: u = 2 c0^2 s r + c1, mu^2 = u^(1/2), lambda^2 = c0^2 u^(-1/2).
  // TauTwoZero:     lambda = lambda0, mu^2 = lambda0^2 (2 s r + c1).
  double s = 0.0, c0 = 1.0, c1 = 1.0;
  double r0 = std::numeric_limits<double>::infinity();  // disk radius when s < 0
  // Constant / TauTwoZero / PowerLaw: lambda = lambda0 (1 + p r)^alpha, mu = mu0 (1 + q r)^beta.
  double lambda0 = 1.0, mu0 = 1.0;
  double p = 0.0, alpha = 0.0, q = 0.0, beta = 0.0;
  std::shared_ptr<const CubicSpline> lambdaTable, muTable;

  template <class T>
  std::pair<T, T> eval(const T& r) const {
    using std::pow;
    using std::sqrt;
    switch (kind) {
      case Kind::BryantSalamon: {
        const T u = 2.0 * c0 * c0 * s * r + c1;
        return {c0 * pow(u, -0.25), pow(u, 0.25)};
      }
      case Kind::TauTwoZero:
        return {T(lambda0), lambda0 * sqrt(2.0 * s * r + c1)};
      case Kind::PowerLaw:
        return {lambda0 * pow(1.0 + p * r, alpha), mu0 * pow(1.0 + q * r, beta)};
      case Kind::Table:
        return {(*lambdaTable)(r), (*muTable)(r)};
      case Kind::Constant:
        break;
    }
    return {T(lambda0), T(mu0)};
  }

  /// lambda, mu and their r-derivatives at r.
  struct Values {
    double lambda, mu, dlambda, dmu;
  };
  Values values(double r) const;

  /// Positive inside the domain; the violated bound otherwise.
  bool contains(double r) const;
  /// Supremum of admissible r (infinity when unbounded).
  double rMax() const;
  std::string describe() const;
};

Profile bsProfile(double s, double c0, double c1);
/// Bryant-Salamon profile on the disk r < r0 for s < 0 (c1 = -2 s c0^2 r0).
Profile bsProfileOnDisk(double s, double c0, double r0);
Profile constantProfile(double lambda, double mu);
/// lambda constant and mu^2 = lambda^2 (2 s r + c1).
Profile tauTwoZeroProfile(double s, double lambda, double c1);
Profile powerLawProfile(double lambda0, double p, double alpha, double mu0, double q, double beta);
Profile tableProfile(const std::vector<double>& r, const std::vector<double>& lambda, const std::vector<double>& mu);
/// A random positive power-law profile defined for all r >= 0.
Profile randomProfile(std::mt19937_64& rng);

/// Radial factors of the closed-form torsion on the bundles of 2-forms:
/// tau1 ~ d(lambda^2 mu^4)/dr - s lambda^4 mu^2 and
/// tau2 ~ d(mu^2 / lambda^2)/dr - 2 s; productRate = d(lambda mu)/dr.
struct RadialFactors {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double productRate = 0.0;
};
RadialFactors radialFactors(const Profile& p, double s, double r);

/// Checks that any two of {lambda mu constant, tau1 = 0, tau2 = 0} force the
/// third. Each pair is enforced by construction of the profile; the third
/// condition is measured on `samples` radii.
struct LemmaCase {
  std::string enforced;    // e.g. "lambda*mu=c0 & tau1=0"
  std::string measured;    // the remaining condition
  double enforcedResidual = 0.0;
  double measuredResidual = 0.0;
  double rMax = 0.0;
};
std::array<LemmaCase, 3> lemmaCheck(double s, double c0, double c1, int samples = 100);

/// Length of a fibre radius, the integral of lambda(t^2 / 2) dt over
/// [0, sqrt(2 r0)], by adaptive Simpson after t = sqrt(2 r0) sin(theta).
struct QuadratureResult {
  double value = 0.0;
  bool converged = false;
  int evaluations = 0;
};
QuadratureResult radiusLength(const Profile& p, double tol = 1e-8);
/// Midpoint rule in theta with n cells (oracle for radiusLength).
double radiusLengthMidpoint(const Profile& p, int n);

/// Fixed-step RK4 for g'' (2 r0 - g^2) - g'^2 g = 0.
struct GeodesicTrace {
  std::vector<double> t, g, dg;
  bool stayedInside = true;
};
GeodesicTrace verticalGeodesic(double r0, double g0, double dg0, double tEnd, int steps);

}  // namespace g2frames
