#pragma once
// Catalog of explicit 4-dimensional chart metrics with their expected
// curvature flags.
//
// All metrics are written once as templates over the scalar type so that
// the same expression yields values and exact jets. Complex models use
// z1 = x1 + i x2, z2 = x3 + i x4.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "g2frames/fields.hpp"

namespace g2frames {

enum class ModelId { Flat, Sphere4, Hyperbolic4, FubiniStudy, ComplexHyperbolic, ProductS2H2 };

struct ExpectedFlags {
  bool einstein = false;
  bool sd = false;   // W- = 0
  bool asd = false;  // W+ = 0
  bool scalarFlat = false;
  int sSign = 0;
  bool sConstant = true;
};

struct ModelSpec {
  std::string name;
  ModelId id = ModelId::Flat;
  double kappa = 1.0;
  MetricField metric;
  double safeRadius = 1.0;  // probes are drawn from |x| < safeRadius
  int orientation = 1;      // -1 when the chart orientation was flipped
  ExpectedFlags expected;
  double sValue = std::numeric_limits<double>::quiet_NaN();  // expected s when constant and known
};

class UnknownModelError : public std::invalid_argument {
 public:
  explicit UnknownModelError(const std::string& name)
      : std::invalid_argument("unknown model '" + name +
                              "' (expected flat, sphere4, hyperbolic4, fubiniStudy, complexHyperbolic, productS2H2)") {}
};

namespace metrics {

template <class T>
Matrix4<T> conformal(const T& factor) {
  Matrix4<T> g{};
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) g[i][k] = T(0.0);
    g[i][i] = factor;
  }
  return g;
}

template <class T>
T normSquared(const std::array<T, 4>& x) {
  return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
}

template <class T>
Matrix4<T> flat(const std::array<T, 4>&) {
  return conformal(T(1.0));
}

/// Round sphere of radius kappa in stereographic coordinates.
template <class T>
Matrix4<T> sphere4(const std::array<T, 4>& x, double kappa) {
  const T q = 1.0 + normSquared(x) / (kappa * kappa);
  return conformal(4.0 * reciprocal(q * q));
}

/// Poincare ball, sectional curvature -1.
template <class T>
Matrix4<T> hyperbolic4(const std::array<T, 4>& x) {
  const T q = 1.0 - normSquared(x);
  return conformal(4.0 * reciprocal(q * q));
}

/// Real form of the hermitian metric sum h_ab dz^a dzbar^b with
/// h_ab = c (delta_ab / q - e z_a-bar z_b / q^2), q = 1 + e |z|^2.
/// e = +1 gives Fubini-Study, e = -1 the Bergman metric on the ball.
template <class T>
Matrix4<T> kaehlerPotentialMetric(const std::array<T, 4>& x, double e, double c) {
  const T q = 1.0 + e * normSquared(x);
  const T iq = reciprocal(q);
  const T iq2 = iq * iq;
  // z_a = re[a] + i im[a]
  const std::array<T, 2> re{x[0], x[2]}, im{x[1], x[3]};
  // h_ab = hr_ab + i hi_ab (hermitian: hr symmetric, hi antisymmetric)
  T hr[2][2], hi[2][2];
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      // conj(z_a) z_b = (re_a re_b + im_a im_b) + i (re_a im_b - im_a re_b)
      hr[a][b] = -c * e * (re[a] * re[b] + im[a] * im[b]) * iq2;
      hi[a][b] = -c * e * (re[a] * im[b] - im[a] * re[b]) * iq2;
      if (a == b) hr[a][b] = hr[a][b] + c * iq;
    }
  }
  // tangent vectors: d/dx1 -> (1, 0), d/dx2 -> (i, 0), d/dx3 -> (0, 1), d/dx4 -> (0, i)
  // g(u, v) = Re sum h_ab u^a conj(v^b)
  Matrix4<T> g{};
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const int a = mu / 2, b = nu / 2;
      const bool iu = mu % 2, iv = nu % 2;
      // u^a conj(v^b) = (i^iu)(conj i)^iv
      if (!iu && !iv) g[mu][nu] = hr[a][b];
      else if (iu && iv) g[mu][nu] = hr[a][b];
      else if (iu && !iv) g[mu][nu] = -1.0 * hi[a][b];  // Re(i h) = -Im h
      else g[mu][nu] = hi[a][b];                         // Re(-i h) = Im h
    }
  }
  // symmetrize (the real part of a hermitian form is symmetric)
  Matrix4<T> out{};
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) out[mu][nu] = 0.5 * (g[mu][nu] + g[nu][mu]);
  return out;
}

// Overall scales chosen so that s = Scal/12 = +1 / -1.
inline constexpr double kFubiniStudyScale = 2.0;
inline constexpr double kBergmanScale = 2.0;

template <class T>
Matrix4<T> fubiniStudy(const std::array<T, 4>& x) {
  return kaehlerPotentialMetric(x, 1.0, kFubiniStudyScale);
}

template <class T>
Matrix4<T> complexHyperbolic(const std::array<T, 4>& x) {
  return kaehlerPotentialMetric(x, -1.0, kBergmanScale);
}

/// Unit round S^2 (x1, x2) times the Poincare disk (x3, x4).
template <class T>
Matrix4<T> productS2H2(const std::array<T, 4>& x) {
  const T p = 1.0 + x[0] * x[0] + x[1] * x[1];
  const T h = 1.0 - x[2] * x[2] - x[3] * x[3];
  Matrix4<T> g = conformal(T(0.0));
  g[0][0] = g[1][1] = 4.0 * reciprocal(p * p);
  g[2][2] = g[3][3] = 4.0 * reciprocal(h * h);
  return g;
}

}  // namespace metrics

/// name in {flat, sphere4, hyperbolic4, fubiniStudy, complexHyperbolic,
/// productS2H2}; kappa is the sphere radius and must be positive.
ModelSpec getModel(const std::string& name, double kappa = 1.0);

std::vector<std::string> modelNames();

struct ExpectedRow {
  std::string name;
  ExpectedFlags flags;
};
std::vector<ExpectedRow> expectedTable();

/// Deterministic probe points in the model's safe ball.
std::vector<Point<4>> probePoints(const ModelSpec& model, int count, std::uint64_t seed);

}  // namespace g2frames
