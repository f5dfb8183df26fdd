#pragma once
// Dense exterior algebra on an oriented n-dimensional space (n <= 8).
//
// A k-form is stored densely over the C(n, k) strictly increasing
// multi-indices. Multi-indices are bit masks; slots follow colexicographic
// order, which does not depend on n, so a form on R^4 and its image under
// the inclusion R^4 -> R^n share slot numbers when the labels are unchanged.
//
// Form<S> is generic in the coefficient type: Form<double> (Multivector) holds
// pointwise values, Form<Jet<D, P>> holds the Taylor data of a form field on a
// D-dimensional chart and supports exact exterior differentiation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "g2frames/jet.hpp"

namespace g2frames {

constexpr int kMaxDim = 8;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace combin {

using Mask = std::uint16_t;

/// Colexicographic rank of a mask among masks with the same popcount.
int rank(Mask m);
/// Mask occupying `slot` among k-subsets (colex order).
Mask unrank(int k, int slot);
int popcount(Mask m);
/// Sign of the permutation sorting the concatenation (a, b) of two disjoint
/// increasing index lists.
int mergeSign(Mask a, Mask b);

struct WedgeEntry {
  std::uint8_t a, b, c;
  std::int8_t sign;
};
/// All (slot_a, slot_b) -> slot_c products for k1-forms times k2-forms on R^n.
const std::vector<WedgeEntry>& wedgeTable(int n, int k1, int k2);

/// Canonicalizes an arbitrary index list; returns sign 0 on repeats.
std::pair<Mask, int> canonical(std::span<const int> indices);

}  // namespace combin

template <class S>
class Form {
 public:
  Form() = default;
  Form(int dim, int degree) : n_(dim), k_(degree) {
    if (dim < 0 || dim > kMaxDim) throw DimensionError("form dimension must be in 0..8");
    if (degree < 0 || degree > dim)
      throw DimensionError("form degree " + std::to_string(degree) + " outside 0.." + std::to_string(dim));
    c_.assign(binomial(dim, degree), S(0.0));
  }

  int dim() const { return n_; }
  int degree() const { return k_; }
  int size() const { return static_cast<int>(c_.size()); }

  const S& operator[](int slot) const { return c_[slot]; }
  S& operator[](int slot) { return c_[slot]; }
  const std::vector<S>& coeffs() const { return c_; }

  combin::Mask maskAt(int slot) const { return combin::unrank(k_, slot); }

  /// Coefficient of e^{i1...ik} for an arbitrary (possibly unsorted) index
  /// list, including the permutation sign; zero on repeated indices.
  S get(std::initializer_list<int> indices) const {
    auto [mask, sign] = combin::canonical(std::span<const int>(indices.begin(), indices.size()));
    if (sign == 0) return S(0.0);
    return c_[combin::rank(mask)] * static_cast<double>(sign);
  }

  /// Adds value * e^{i1...ik}, with sign normalization.
  Form& add(std::initializer_list<int> indices, const S& value) {
    if (static_cast<int>(indices.size()) != k_) throw DimensionError("index list length differs from degree");
    auto [mask, sign] = combin::canonical(std::span<const int>(indices.begin(), indices.size()));
    for (int i : indices)
      if (i < 0 || i >= n_) throw DimensionError("basis index out of range");
    if (sign != 0) c_[combin::rank(mask)] += value * static_cast<double>(sign);
    return *this;
  }

  static Form basis(int dim, std::initializer_list<int> indices, double coeff = 1.0) {
    Form f(dim, static_cast<int>(indices.size()));
    f.add(indices, S(coeff));
    return f;
  }

  static Form scalar(int dim, const S& value) {
    Form f(dim, 0);
    f.c_[0] = value;
    return f;
  }

  Form& operator+=(const Form& o) {
    checkSame(o);
    for (int i = 0; i < size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Form& operator-=(const Form& o) {
    checkSame(o);
    for (int i = 0; i < size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Form& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator-(Form a) { return a *= -1.0; }
  friend Form operator*(Form a, double s) { return a *= s; }
  friend Form operator*(double s, Form a) { return a *= s; }

  /// Multiplication by a scalar of the coefficient type (a 0-form).
  friend Form operator*(const S& s, Form a)
    requires(!std::is_same_v<S, double>)
  {
    for (auto& x : a.c_) x = s * x;
    return a;
  }

 private:
  void checkSame(const Form& o) const {
    if (n_ != o.n_ || k_ != o.k_)
      throw DimensionError("form addition needs equal (dimension, degree): (" + std::to_string(n_) + "," +
                           std::to_string(k_) + ") vs (" + std::to_string(o.n_) + "," + std::to_string(o.k_) + ")");
  }

  int n_ = 0;
  int k_ = 0;
  std::vector<S> c_;
};

using Multivector = Form<double>;
template <int D, int P>
using JetForm = Form<Jet<D, P>>;

/// a ^ b. Bilinear, associative, graded-commutative. When deg a + deg b
/// exceeds n, the zero form of degree n is returned.
template <class S>
Form<S> wedge(const Form<S>& a, const Form<S>& b) {
  if (a.dim() != b.dim())
    throw DimensionError("wedge of forms on spaces of dimension " + std::to_string(a.dim()) + " and " +
                         std::to_string(b.dim()));
  const int n = a.dim();
  const int k = a.degree() + b.degree();
  if (k > n) return Form<S>(n, n);
  Form<S> out(n, k);
  for (const auto& e : combin::wedgeTable(n, a.degree(), b.degree())) {
    if (e.sign > 0)
      out[e.c] += a[e.a] * b[e.b];
    else
      out[e.c] -= a[e.a] * b[e.b];
  }
  return out;
}

template <class S, class... Rest>
Form<S> wedge(const Form<S>& a, const Form<S>& b, const Rest&... rest) {
  return wedge(wedge(a, b), rest...);
}

/// Pointwise value of a jet form.
template <int D, int P>
Multivector value(const JetForm<D, P>& f) {
  Multivector out(f.dim(), f.degree());
  for (int i = 0; i < f.size(); ++i) out[i] = f[i].value();
  return out;
}

/// Exterior derivative of a jet form; the result loses one order.
template <int D, int P>
  requires(P >= 1)
JetForm<D, P - 1> exteriorDerivative(const JetForm<D, P>& f) {
  const int k = f.degree();
  if (k >= D) return JetForm<D, P - 1>(D, D);
  JetForm<D, P - 1> out(D, k + 1);
  for (int slot = 0; slot < f.size(); ++slot) {
    const combin::Mask m = f.maskAt(slot);
    for (int v = 0; v < D; ++v) {
      if (m & (1u << v)) continue;
      // d(c dx^I) = sum_v dc/dx^v dx^v ^ dx^I
      const int sign = combin::mergeSign(static_cast<combin::Mask>(1u << v), m);
      const auto target = static_cast<combin::Mask>(m | (1u << v));
      auto partial = f[slot].derivative(v);
      if (sign < 0) partial = -partial;
      out[combin::rank(target)] += partial;
    }
  }
  return out;
}

template <int Q, int D, int P>
  requires(Q <= P)
JetForm<D, Q> truncate(const JetForm<D, P>& f) {
  JetForm<D, Q> out(D, f.degree());
  for (int i = 0; i < f.size(); ++i) out[i] = f[i].template truncate<Q>();
  return out;
}

/// Embeds a jet form on a D1-chart into a D2-chart: labels and variables
/// shift by `offset` (used to pull base forms back to the 7-charts).
template <int D2, int Q, int D1, int P>
JetForm<D2, Q> liftForm(const JetForm<D1, P>& f, int offset) {
  JetForm<D2, Q> out(D2, f.degree());
  for (int slot = 0; slot < f.size(); ++slot) {
    const auto m = static_cast<combin::Mask>(f.maskAt(slot) << offset);
    out[combin::rank(m)] = lift<D2, Q>(f[slot], offset);
  }
  return out;
}

Multivector liftForm(const Multivector& f, int newDim, int offset);

/// Components of f restricted to basis labels [offset, offset + dim).
/// Components involving other labels are dropped.
Multivector restrictForm(const Multivector& f, int offset, int dim);

/// Max-abs of the coefficients.
double maxAbs(const Multivector& f);
/// Euclidean norm of the coefficient vector (the induced norm when the
/// basis is orthonormal).
double norm(const Multivector& f);
/// Induced inner product for a diagonal metric on the 1-form basis dual.
double inner(const Multivector& a, const Multivector& b, std::span<const double> metricDiag);
double norm(const Multivector& a, std::span<const double> metricDiag);

/// Hodge star of a diagonal Riemannian metric (entries g(e_i, e_i) > 0) and
/// orientation +1/-1 relative to e^{1..n}; satisfies a ^ *b = <a, b> vol.
Multivector hodge(const Multivector& a, std::span<const double> metricDiag, int orientation = 1);
/// Euclidean Hodge star.
Multivector hodge(const Multivector& a, int orientation = 1);

/// Interior product v _| a.
Multivector interior(std::span<const double> v, const Multivector& a);

/// Coordinate change: given the rows of `coframe` (coframe[i] are the
/// components of new basis form eps^i in the old basis), rewrites an old
/// basis form in the new basis. `inverse` holds old-basis one-forms in terms
/// of the new basis: dx^mu = sum_i inverse(mu, i) eps^i.
Multivector changeBasis(const Multivector& a, std::span<const double> inverseRowMajor);

/// Multiplies each component e^I by prod_{i in I} scale[i].
Multivector rescale(const Multivector& a, std::span<const double> scale);

/// Human-readable listing "c e^{145} + ..." with 1-based labels.
std::string toString(const Multivector& a, int labelOffset = 1, double threshold = 0.0);

}  // namespace g2frames
