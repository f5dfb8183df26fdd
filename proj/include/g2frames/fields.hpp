#pragma once
// Scalar and form fields on a D-dimensional chart, evaluated as jets.
//
// A field is built from one generic callable taking the seeded coordinate
// jets std::array<Jet<D, P>, D> and returning a Jet<D, P> (or JetForm<D, P>).
// The callable is instantiated for every order up to the field's maximum,
// so a single closed-form expression yields exact derivatives of any order.

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>

#include "g2frames/exterior.hpp"
#include "g2frames/jet.hpp"

namespace g2frames {

template <int D>
using Point = std::array<double, D>;

class JetOrderError : public std::runtime_error {
 public:
  JetOrderError(int requested, int available)
      : std::runtime_error("jet of order " + std::to_string(requested) + " requested but only order " +
                           std::to_string(available) + " is available"),
        requested_(requested),
        available_(available) {}
  int requested() const { return requested_; }
  int available() const { return available_; }

 private:
  int requested_, available_;
};

template <int D>
class ScalarField {
 public:
  template <class F>
  explicit ScalarField(F f)
      : evals_(make<0>(f), make<1>(f), make<2>(f), make<3>(f)) {}

  template <int P>
  Jet<D, P> jet(const Point<D>& x) const {
    return std::get<P>(evals_)(x);
  }
  double operator()(const Point<D>& x) const { return jet<0>(x).value(); }

 private:
  template <int P, class F>
  static std::function<Jet<D, P>(const Point<D>&)> make(F f) {
    return [f](const Point<D>& x) { return Jet<D, P>(f(seed<D, P>(x))); };
  }

  std::tuple<std::function<Jet<D, 0>(const Point<D>&)>, std::function<Jet<D, 1>(const Point<D>&)>,
             std::function<Jet<D, 2>(const Point<D>&)>, std::function<Jet<D, 3>(const Point<D>&)>>
      evals_;
};

template <int D>
class FormField {
 public:
  template <class F>
  FormField(int degree, F f, int maxOrder = 3) : degree_(degree), maxOrder_(maxOrder) {
    std::get<0>(evals_) = [f](const Point<D>& x) { return f(seed<D, 0>(x)); };
    std::get<1>(evals_) = [f](const Point<D>& x) { return f(seed<D, 1>(x)); };
    std::get<2>(evals_) = [f](const Point<D>& x) { return f(seed<D, 2>(x)); };
    std::get<3>(evals_) = [f](const Point<D>& x) { return f(seed<D, 3>(x)); };
  }

  int degree() const { return degree_; }
  int maxOrder() const { return maxOrder_; }

  template <int P>
  JetForm<D, P> jet(const Point<D>& x) const {
    if (P > maxOrder_) throw JetOrderError(P, maxOrder_);
    auto out = std::get<P>(evals_)(x);
    if (out.degree() != degree_ || out.dim() != D) throw DimensionError("form field evaluator returned wrong degree");
    return out;
  }

  Multivector operator()(const Point<D>& x) const { return value(jet<0>(x)); }

 private:
  template <int P>
  using Eval = std::function<JetForm<D, P>(const Point<D>&)>;

  int degree_;
  int maxOrder_;
  std::tuple<Eval<0>, Eval<1>, Eval<2>, Eval<3>> evals_;
};

/// Value of d(a) at a point; needs first-order jets of the coefficients.
template <int D>
Multivector dform(const FormField<D>& a, const std::type_identity_t<Point<D>>& x) {
  return value(exteriorDerivative(a.template jet<1>(x)));
}

/// d(a) as a field; its maximum order is one less than that of a.
template <int D>
FormField<D> d(const FormField<D>& a) {
  if (a.maxOrder() < 1) throw JetOrderError(1, a.maxOrder());
  const int k = std::min(a.degree() + 1, D);
  return FormField<D>(
      k,
      [a](const auto& coords) {
        using J = typename std::decay_t<decltype(coords)>::value_type;
        constexpr int P = J::kOrder;
        if constexpr (P >= 3) {
          throw JetOrderError(P + 1, 3);
          return JetForm<D, P>(D, std::min(a.degree() + 1, D));
        } else {
          Point<D> x;
          for (int i = 0; i < D; ++i) x[i] = coords[i].value();
          return exteriorDerivative(a.template jet<P + 1>(x));
        }
      },
      a.maxOrder() - 1);
}

template <int D>
FormField<D> wedge(const FormField<D>& a, const FormField<D>& b) {
  return FormField<D>(
      std::min(a.degree() + b.degree(), D),
      [a, b](const auto& coords) {
        using J = typename std::decay_t<decltype(coords)>::value_type;
        constexpr int P = J::kOrder;
        Point<D> x;
        for (int i = 0; i < D; ++i) x[i] = coords[i].value();
        return wedge(a.template jet<P>(x), b.template jet<P>(x));
      },
      std::min(a.maxOrder(), b.maxOrder()));
}

template <class T>
using Matrix4 = std::array<std::array<T, 4>, 4>;

/// A symmetric 4x4 chart metric, evaluable as jets up to order 3.
class MetricField {
 public:
  template <class F>
  explicit MetricField(F f) {
    std::get<0>(evals_) = [f](const Point<4>& x) { return promote<0>(f(seed<4, 0>(x))); };
    std::get<1>(evals_) = [f](const Point<4>& x) { return promote<1>(f(seed<4, 1>(x))); };
    std::get<2>(evals_) = [f](const Point<4>& x) { return promote<2>(f(seed<4, 2>(x))); };
    std::get<3>(evals_) = [f](const Point<4>& x) { return promote<3>(f(seed<4, 3>(x))); };
  }
  MetricField() : MetricField([](const auto& x) {
    using J = typename std::decay_t<decltype(x)>::value_type;
    Matrix4<J> g{};
    for (int i = 0; i < 4; ++i) g[i][i] = J(1.0);
    return g;
  }) {}

  template <int P>
  Matrix4<Jet<4, P>> jet(const Point<4>& x) const {
    return std::get<P>(evals_)(x);
  }

  Matrix4<double> operator()(const Point<4>& x) const {
    const auto j = jet<0>(x);
    Matrix4<double> g;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) g[i][k] = j[i][k].value();
    return g;
  }

 private:
  template <int P, class M>
  static Matrix4<Jet<4, P>> promote(const M& m) {
    Matrix4<Jet<4, P>> out;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) out[i][k] = Jet<4, P>(m[i][k]);
    return out;
  }

  template <int P>
  using Eval = std::function<Matrix4<Jet<4, P>>(const Point<4>&)>;
  std::tuple<Eval<0>, Eval<1>, Eval<2>, Eval<3>> evals_;
};

}  // namespace g2frames
