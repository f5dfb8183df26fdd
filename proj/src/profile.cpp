#include "g2frames/profile.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace g2frames {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw std::invalid_argument("spline needs at least two (x, y) pairs of equal length");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw std::invalid_argument("spline knots must be strictly increasing");
  // Natural spline: second derivatives m with m_0 = m_{n-1} = 0 (Thomas algorithm).
  std::vector<double> h(n - 1), m(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];
  if (n > 2) {
    std::vector<double> diag(n - 2), rhs(n - 2), upper(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      diag[i - 1] = 2.0 * (h[i - 1] + h[i]);
      upper[i - 1] = h[i];
      rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
    }
    for (std::size_t i = 1; i < diag.size(); ++i) {
      const double w = h[i] / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = diag.size(); i-- > 0;) {
      const double next = i + 1 < diag.size() ? m[i + 2] : 0.0;
      m[i + 1] = (rhs[i] - upper[i] * next) / diag[i];
    }
  }
  b_.resize(n - 1);
  c_.resize(n - 1);
  d_.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    b_[i] = (y_[i + 1] - y_[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
    c_[i] = m[i] / 2.0;
    d_[i] = (m[i + 1] - m[i]) / (6.0 * h[i]);
  }
}

Profile::Values Profile::values(double r) const {
  const auto [l, m] = eval(Jet<1, 1>::variable(0, r));
  return {l.value(), m.value(), l.gradient(0), m.gradient(0)};
}

bool Profile::contains(double r) const {
  if (r < 0.0) return false;
  switch (kind) {
    case Kind::BryantSalamon:
      return 2.0 * c0 * c0 * s * r + c1 > 0.0;
    case Kind::TauTwoZero:
      return 2.0 * s * r + c1 > 0.0;
    case Kind::PowerLaw:
      return 1.0 + p * r > 0.0 && 1.0 + q * r > 0.0;
    case Kind::Table:
      return r >= lambdaTable->front() && r <= lambdaTable->back();
    case Kind::Constant:
      break;
  }
  return true;
}

double Profile::rMax() const {
  const double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case Kind::BryantSalamon:
      return s < 0.0 ? -c1 / (2.0 * c0 * c0 * s) : inf;
    case Kind::TauTwoZero:
      return s < 0.0 ? -c1 / (2.0 * s) : inf;
    case Kind::PowerLaw: {
      double r = inf;
      if (p < 0.0) r = std::min(r, -1.0 / p);
      if (q < 0.0) r = std::min(r, -1.0 / q);
      return r;
    }
    case Kind::Table:
      return lambdaTable->back();
    case Kind::Constant:
      break;
  }
  return inf;
}

std::string Profile::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::BryantSalamon:
      os << "bs(s=" << s << ", c0=" << c0 << ", c1=" << c1 << ")";
      break;
    case Kind::TauTwoZero:
      os << "tau2zero(s=" << s << ", lambda=" << lambda0 << ", c1=" << c1 << ")";
      break;
    case Kind::PowerLaw:
      os << "powerlaw(lambda0=" << lambda0 << ", p=" << p << ", alpha=" << alpha << ", mu0=" << mu0 << ", q=" << q
         << ", beta=" << beta << ")";
      break;
    case Kind::Table:
      os << "table(" << lambdaTable->knots().size() << " knots)";
      break;
    case Kind::Constant:
      os << "constant(lambda=" << lambda0 << ", mu=" << mu0 << ")";
      break;
  }
  return os.str();
}

Profile bsProfile(double s, double c0, double c1) {
  if (!(c0 > 0.0)) throw ProfileDomainError("bs profile needs c0 > 0, got " + std::to_string(c0));
  if (c1 <= 0.0 && s <= 0.0)
    throw ProfileDomainError("bs profile has empty domain: 2 c0^2 s r + c1 <= 0 for all r >= 0 (s=" + std::to_string(s) +
                             ", c1=" + std::to_string(c1) + ")");
  Profile p;
  p.kind = Profile::Kind::BryantSalamon;
  p.s = s;
  p.c0 = c0;
  p.c1 = c1;
  if (s < 0.0) p.r0 = -c1 / (2.0 * c0 * c0 * s);
  return p;
}

Profile bsProfileOnDisk(double s, double c0, double r0) {
  if (!(s < 0.0)) throw ProfileDomainError("disk profile needs s < 0");
  if (!(r0 > 0.0)) throw ProfileDomainError("disk radius r0 must be positive");
  return bsProfile(s, c0, -2.0 * s * c0 * c0 * r0);
}

Profile constantProfile(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw ProfileDomainError("constant profile needs lambda, mu > 0");
  Profile p;
  p.kind = Profile::Kind::Constant;
  p.lambda0 = lambda;
  p.mu0 = mu;
  return p;
}

Profile tauTwoZeroProfile(double s, double lambda, double c1) {
  if (!(lambda > 0.0)) throw ProfileDomainError("tau2zero profile needs lambda > 0");
  if (!(c1 > 0.0)) throw ProfileDomainError("tau2zero profile needs c1 > 0 so that r = 0 is admissible");
  Profile p;
  p.kind = Profile::Kind::TauTwoZero;
  p.s = s;
  p.lambda0 = lambda;
  p.c1 = c1;
  if (s < 0.0) p.r0 = -c1 / (2.0 * s);
  return p;
}

Profile powerLawProfile(double lambda0, double pp, double alpha, double mu0, double qq, double beta) {
  if (!(lambda0 > 0.0) || !(mu0 > 0.0)) throw ProfileDomainError("power-law profile needs lambda0, mu0 > 0");
  Profile p;
  p.kind = Profile::Kind::PowerLaw;
  p.lambda0 = lambda0;
  p.mu0 = mu0;
  p.p = pp;
  p.alpha = alpha;
  p.q = qq;
  p.beta = beta;
  return p;
}

Profile tableProfile(const std::vector<double>& r, const std::vector<double>& lambda, const std::vector<double>& mu) {
  for (double v : lambda)
    if (!(v > 0.0)) throw ProfileDomainError("table profile needs lambda > 0 at every knot");
  for (double v : mu)
    if (!(v > 0.0)) throw ProfileDomainError("table profile needs mu > 0 at every knot");
  Profile p;
  p.kind = Profile::Kind::Table;
  p.lambdaTable = std::make_shared<CubicSpline>(r, lambda);
  p.muTable = std::make_shared<CubicSpline>(r, mu);
  return p;
}

Profile randomProfile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> scale(0.6, 1.6), rate(0.0, 1.5), power(-0.75, 0.75);
  const double l0 = scale(rng), p = rate(rng), a = power(rng);
  const double m0 = scale(rng), q = rate(rng), b = power(rng);
  return powerLawProfile(l0, p, a, m0, q, b);
}

RadialFactors radialFactors(const Profile& p, double s, double r) {
  using J = Jet<1, 1>;
  const auto [l, m] = p.eval(J::variable(0, r));
  const J l2 = l * l, m2 = m * m;
  const J a = l2 * m2 * m2;
  const J b = m2 / l2;
  const J c = l * m;
  RadialFactors f;
  f.tau1 = a.gradient(0) - s * (l2 * l2 * m2).value();
  f.tau2 = b.gradient(0) - 2.0 * s;
  f.productRate = c.gradient(0);
  return f;
}

std::array<LemmaCase, 3> lemmaCheck(double s, double c0, double c1, int samples) {
  if (!(c0 > 0.0) || !(c1 > 0.0)) throw ProfileDomainError("lemma check needs c0 > 0 and c1 > 0");
  const Profile bs = bsProfile(s, c0, c1);
  const double vMax = s < 0.0 ? -c1 / (2.0 * s) : std::numeric_limits<double>::infinity();
  const double rMax = std::isfinite(std::min(bs.rMax(), vMax)) ? 0.9 * std::min(bs.rMax(), vMax) : 2.0;
  std::vector<double> rs(samples);
  for (int k = 0; k < samples; ++k) rs[k] = rMax * k / samples;

  std::array<LemmaCase, 3> out;
  out[0].enforced = "lambda*mu=c0 & tau1=0";
  out[0].measured = "tau2=0";
  out[1].enforced = "lambda*mu=c0 & tau2=0";
  out[1].measured = "tau1=0";
  for (double r : rs) {
    const auto f = radialFactors(bs, s, r);
    out[0].enforcedResidual = std::max({out[0].enforcedResidual, std::abs(f.productRate), std::abs(f.tau1)});
    out[0].measuredResidual = std::max(out[0].measuredResidual, std::abs(f.tau2));
    out[1].enforcedResidual = std::max({out[1].enforcedResidual, std::abs(f.productRate), std::abs(f.tau2)});
    out[1].measuredResidual = std::max(out[1].measuredResidual, std::abs(f.tau1));
  }
  out[0].rMax = out[1].rMax = rMax;

  // tau2 = 0 enforced by lambda^2 = mu^2 / v with v = 2 s r + c1; tau1 = 0 then
  // reads (log mu)' = s / (2 v), integrated by RK4 between the sample radii.
  auto& c = out[2];
  c.enforced = "tau1=0 & tau2=0";
  c.measured = "lambda*mu=const";
  c.rMax = rMax;
  const auto slope = [s, c1](double r) { return s / (2.0 * (2.0 * s * r + c1)); };
  double y = std::log(std::sqrt(c0) * std::pow(c1, 0.25));
  double product0 = 0.0;
  double r = 0.0;
  const int sub = 50;
  for (int k = 0; k < samples; ++k) {
    const double target = rs[k];
    const double h = (target - r) / sub;
    for (int i = 0; i < sub && h > 0.0; ++i) {
      const double k1 = slope(r), k2 = slope(r + 0.5 * h), k4 = slope(r + h);
      y += h * (k1 + 4.0 * k2 + k4) / 6.0;
      r += h;
    }
    r = target;
    const double v = 2.0 * s * r + c1;
    const double mu = std::exp(y);
    const double lambda = mu / std::sqrt(v);
    // enforced residuals: tau2 factor from v' = 2 s, tau1 factor with mu' = mu s / (2 v)
    const double dmu = mu * slope(r);
    const double w = std::pow(mu, 6) / v;
    const double dw = 6.0 * std::pow(mu, 5) * dmu / v - 2.0 * s * std::pow(mu, 6) / (v * v);
    const double tau1 = dw - s * std::pow(lambda, 4) * mu * mu;
    c.enforcedResidual = std::max(c.enforcedResidual, std::abs(tau1) / std::max(1.0, std::abs(w)));
    if (k == 0) product0 = lambda * mu;
    c.measuredResidual = std::max(c.measuredResidual, std::abs(lambda * mu - product0));
  }
  return out;
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb, double m, double fm,
               double whole, double tol, int depth, int& evals, bool& ok) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  evals += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    ok = false;
    return left + right + delta / 15.0;
  }
  return simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, evals, ok) +
         simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, evals, ok);
}

std::function<double(double)> lengthIntegrand(const Profile& p) {
  const double r0 = p.rMax();
  if (!std::isfinite(r0)) throw ProfileDomainError("radius length needs a bounded profile domain (s < 0)");
  const double scale = std::sqrt(2.0 * r0);
  return [p, r0, scale](double theta) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    const double r = r0 * sn * sn;
    if (!p.contains(r) || c <= 0.0) return 0.0;  // integrable endpoint: the product tends to 0
    return p.values(r).lambda * scale * c;
  };
}

}  // namespace

QuadratureResult radiusLength(const Profile& p, double tol) {
  // theta = (pi/2)(1 - w^2) turns the square-root endpoint behaviour in theta
  // into a smooth w^2 factor, so the recursion terminates at tol = 1e-8.
  const auto g = lengthIntegrand(p);
  const auto f = [&g](double w) { return g(0.5 * M_PI * (1.0 - w * w)) * M_PI * w; };
  const double a = 0.0, b = 1.0, m = 0.5;
  QuadratureResult res;
  const double fa = f(a), fb = f(b), fm = f(m);
  res.evaluations = 3;
  res.converged = true;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  res.value = simpson(f, a, fa, b, fb, m, fm, whole, tol, 50, res.evaluations, res.converged);
  return res;
}

double radiusLengthMidpoint(const Profile& p, int n) {
  const auto f = lengthIntegrand(p);
  const double h = 0.5 * M_PI / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f((i + 0.5) * h);
  return sum * h;
}

GeodesicTrace verticalGeodesic(double r0, double g0, double dg0, double tEnd, int steps) {
  const double bound = std::sqrt(2.0 * r0);
  if (std::abs(g0) >= bound) throw ProfileDomainError("geodesic must start inside (-sqrt(2 r0), sqrt(2 r0))");
  const auto accel = [r0](double g, double dg) { return dg * dg * g / (2.0 * r0 - g * g); };
  GeodesicTrace tr;
  const double h = tEnd / steps;
  double g = g0, v = dg0;
  tr.t.push_back(0.0);
  tr.g.push_back(g);
  tr.dg.push_back(v);
  for (int i = 0; i < steps; ++i) {
    const double k1g = v, k1v = accel(g, v);
    const double k2g = v + 0.5 * h * k1v, k2v = accel(g + 0.5 * h * k1g, v + 0.5 * h * k1v);
    const double k3g = v + 0.5 * h * k2v, k3v = accel(g + 0.5 * h * k2g, v + 0.5 * h * k2v);
    const double k4g = v + h * k3v, k4v = accel(g + h * k3g, v + h * k3v);
    g += h * (k1g + 2 * k2g + 2 * k3g + k4g) / 6.0;
    v += h * (k1v + 2 * k2v + 2 * k3v + k4v) / 6.0;
    tr.t.push_back((i + 1) * h);
    tr.g.push_back(g);
    tr.dg.push_back(v);
    if (!(std::abs(g) < bound)) {
      tr.stayedInside = false;
      break;
    }
  }
  return tr;
}

}  // namespace g2frames
