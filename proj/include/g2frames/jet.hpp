#pragma once
// Truncated multivariate Taylor polynomials ("jets") for forward-mode
// differentiation up to third order.
//
// A Jet<D, P> stores the Taylor coefficients c_e of a scalar function of D
// variables around a base point, for every multi-exponent e with |e| <= P:
//
//     f(x0 + h) = sum_e c_e h^e + O(|h|^{P+1})
//
// Monomials are ordered by total degree and lexicographically inside one
// degree, so the coefficient array of Jet<D, Q> is a prefix of the one of
// Jet<D, P> for Q < P. Truncation is a copy of the prefix.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace g2frames {

constexpr int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return static_cast<int>(r);
}

/// Number of monomials of degree <= P in D variables.
constexpr int jetSize(int D, int P) { return binomial(D + P, P); }

namespace detail {

template <int D, int P>
struct MonomialTable {
  static constexpr int N = jetSize(D, P);

  struct Product {
    std::uint16_t a, b, c;
  };
  struct Derivative {
    std::uint16_t src, dst;
    double factor;
  };

  std::array<std::array<std::uint8_t, D>, N> exps{};
  std::array<std::uint8_t, N> degree{};
  std::vector<Product> products;
  std::array<std::vector<Derivative>, D> derivatives;
  std::vector<int> lookup;  // base-(P+1) encoding of an exponent -> index

  static int encode(const std::array<std::uint8_t, D>& e) {
    int code = 0;
    for (int v = D - 1; v >= 0; --v) code = code * (P + 1) + e[v];
    return code;
  }

  int indexOf(const std::array<std::uint8_t, D>& e) const { return lookup[encode(e)]; }

  MonomialTable() {
    int total = 1;
    for (int v = 0; v < D; ++v) total *= (P + 1);
    lookup.assign(total, -1);

    int idx = 0;
    std::array<std::uint8_t, D> e{};
    for (int deg = 0; deg <= P; ++deg) enumerate(e, 0, deg, deg, idx);

    for (int a = 0; a < N; ++a) {
      for (int b = 0; b < N; ++b) {
        if (degree[a] + degree[b] > P) continue;
        std::array<std::uint8_t, D> s{};
        for (int v = 0; v < D; ++v) s[v] = exps[a][v] + exps[b][v];
        products.push_back({static_cast<std::uint16_t>(a), static_cast<std::uint16_t>(b),
                            static_cast<std::uint16_t>(indexOf(s))});
      }
    }
    for (int v = 0; v < D; ++v) {
      for (int a = 0; a < N; ++a) {
        if (exps[a][v] == 0) continue;
        auto s = exps[a];
        s[v] -= 1;
        derivatives[v].push_back({static_cast<std::uint16_t>(a),
                                  static_cast<std::uint16_t>(indexOf(s)),
                                  static_cast<double>(exps[a][v])});
      }
    }
  }

 private:
  // Lexicographic enumeration with the first variable varying slowest.
  void enumerate(std::array<std::uint8_t, D>& e, int var, int remaining, int deg, int& idx) {
    if (var == D - 1) {
      e[var] = static_cast<std::uint8_t>(remaining);
      exps[idx] = e;
      degree[idx] = static_cast<std::uint8_t>(deg);
      lookup[encode(e)] = idx;
      ++idx;
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      e[var] = static_cast<std::uint8_t>(k);
      enumerate(e, var + 1, remaining - k, deg, idx);
    }
    e[var] = 0;
  }
};

template <int D, int P>
const MonomialTable<D, P>& monomials() {
  static const MonomialTable<D, P> table;
  return table;
}

}  // namespace detail

template <int D, int P>
class Jet {
  static_assert(D >= 1 && D <= 8, "jets support up to 8 variables");
  static_assert(P >= 0 && P <= 3, "jets support orders 0..3");

 public:
  static constexpr int kDim = D;
  static constexpr int kOrder = P;
  static constexpr int kSize = jetSize(D, P);

  Jet() { c_.fill(0.0); }
  Jet(double value) {  // NOLINT(google-explicit-constructor): constants promote
    c_.fill(0.0);
    c_[0] = value;
  }

  /// The coordinate function x_var expanded around `value`.
  static Jet variable(int var, double value) {
    Jet j(value);
    if constexpr (P >= 1) j.c_[1 + var] = 1.0;
    return j;
  }

  double value() const { return c_[0]; }
  double coeff(int i) const { return c_[i]; }
  double& coeff(int i) { return c_[i]; }
  const std::array<double, kSize>& coeffs() const { return c_; }

  /// First partial derivative at the base point.
  double gradient(int var) const {
    if constexpr (P >= 1) return c_[1 + var];
    return 0.0;
  }

  /// Partial derivative d^|e| f / dx^e at the base point.
  double partial(const std::array<std::uint8_t, D>& e) const {
    const auto& t = detail::monomials<D, P>();
    int deg = 0;
    double fact = 1.0;
    for (int v = 0; v < D; ++v) {
      deg += e[v];
      for (int k = 2; k <= e[v]; ++k) fact *= k;
    }
    if (deg > P) return 0.0;
    return fact * c_[t.indexOf(e)];
  }

  /// Exact partial derivative as a jet of one order less.
  template <int Q = P>
    requires(Q >= 1)
  Jet<D, P - 1> derivative(int var) const {
    Jet<D, P - 1> out;
    for (const auto& d : detail::monomials<D, P>().derivatives[var]) {
      if (d.dst < Jet<D, P - 1>::kSize) out.coeff(d.dst) += d.factor * c_[d.src];
    }
    return out;
  }

  template <int Q>
    requires(Q <= P)
  Jet<D, Q> truncate() const {
    Jet<D, Q> out;
    for (int i = 0; i < Jet<D, Q>::kSize; ++i) out.coeff(i) = c_[i];
    return out;
  }

  Jet& operator+=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int i = 0; i < kSize; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) {
    for (auto& x : a.c_) x = -x;
    return a;
  }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, double s) {
    a.c_[0] -= s;
    return a;
  }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator/(Jet a, double s) { return a *= (1.0 / s); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet out;
    for (const auto& p : detail::monomials<D, P>().products) out.c_[p.c] += a.c_[p.a] * b.c_[p.b];
    return out;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(double s, const Jet& b) { return s * reciprocal(b); }

  /// f(x) for a univariate f given its derivatives f^(k)(x0), k = 0..P.
  static Jet compose(const Jet& x, const std::array<double, P + 1>& derivs) {
    Jet h = x;
    h.c_[0] = 0.0;
    Jet out(derivs[0]);
    Jet power(1.0);
    double factorial = 1.0;
    for (int k = 1; k <= P; ++k) {
      power = power * h;
      factorial *= k;
      out += power * (derivs[k] / factorial);
    }
    return out;
  }

  friend Jet reciprocal(const Jet& x) {
    const double v = x.value();
    std::array<double, P + 1> d{};
    double term = 1.0 / v;
    for (int k = 0; k <= P; ++k) {
      d[k] = term;
      term *= -(k + 1) / v;
    }
    return compose(x, d);
  }

  friend Jet pow(const Jet& x, double p) {
    const double v = x.value();
    std::array<double, P + 1> d{};
    double coef = 1.0;
    for (int k = 0; k <= P; ++k) {
      d[k] = coef * std::pow(v, p - k);
      coef *= (p - k);
    }
    return compose(x, d);
  }

  friend Jet sqrt(const Jet& x) { return pow(x, 0.5); }

  friend Jet exp(const Jet& x) {
    std::array<double, P + 1> d{};
    d.fill(std::exp(x.value()));
    return compose(x, d);
  }

  friend Jet log(const Jet& x) {
    const double v = x.value();
    std::array<double, P + 1> d{};
    d[0] = std::log(v);
    double term = 1.0 / v;
    for (int k = 1; k <= P; ++k) {
      d[k] = term;
      term *= -k / v;
    }
    return compose(x, d);
  }

  friend Jet sin(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const std::array<double, 4> cycle{s, c, -s, -c};
    std::array<double, P + 1> d{};
    for (int k = 0; k <= P; ++k) d[k] = cycle[k % 4];
    return compose(x, d);
  }

  friend Jet cos(const Jet& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const std::array<double, 4> cycle{c, -s, -c, s};
    std::array<double, P + 1> d{};
    for (int k = 0; k <= P; ++k) d[k] = cycle[k % 4];
    return compose(x, d);
  }

 private:
  std::array<double, kSize> c_;
};

/// Coordinate jets of a chart point: x_i seeded as independent variables.
template <int D, int P>
std::array<Jet<D, P>, D> seed(const std::array<double, D>& x) {
  std::array<Jet<D, P>, D> out;
  for (int i = 0; i < D; ++i) out[i] = Jet<D, P>::variable(i, x[i]);
  return out;
}

/// Re-expresses a jet in D1 variables as a jet in D2 >= D1 variables, where
/// old variable v becomes new variable v + offset. Higher-order terms beyond
/// Q are dropped.
template <int D2, int Q, int D1, int P>
Jet<D2, Q> lift(const Jet<D1, P>& j, int offset) {
  static_assert(D2 >= D1);
  constexpr int kQ = (Q < P) ? Q : P;
  const auto& src = detail::monomials<D1, P>();
  const auto& dst = detail::monomials<D2, Q>();
  Jet<D2, Q> out;
  for (int i = 0; i < Jet<D1, kQ>::kSize; ++i) {
    std::array<std::uint8_t, D2> e{};
    for (int v = 0; v < D1; ++v) e[v + offset] = src.exps[i][v];
    out.coeff(dst.indexOf(e)) = j.coeff(i);
  }
  return out;
}

// Scalar helpers that let model code be written once for double and jets.
inline double reciprocal(double x) { return 1.0 / x; }
inline double value(double x) { return x; }
template <int D, int P>
double value(const Jet<D, P>& j) {
  return j.value();
}

}  // namespace g2frames
