#include <gtest/gtest.h>

#include <random>

#include "g2frames/exterior.hpp"
#include "g2frames/fields.hpp"
#include "g2frames/matrix_form.hpp"

namespace {

using namespace g2frames;

// Base labels e^4..e^7 sit at internal indices 0..3 on R^4.
constexpr int e4 = 0, e5 = 1, e6 = 2, e7 = 3;

Multivector randomForm(int n, int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Multivector f(n, k);
  for (int i = 0; i < f.size(); ++i) f[i] = u(rng);
  return f;
}

TEST(Wedge, BasisProduct) {
  const auto w = wedge(Multivector::basis(4, {e4}), Multivector::basis(4, {e5}));
  EXPECT_EQ(w.degree(), 2);
  EXPECT_DOUBLE_EQ(w.get({e4, e5}), 1.0);
  EXPECT_DOUBLE_EQ(w.get({e5, e4}), -1.0);
}

TEST(Wedge, SelfDualTwoFormSquaresToTwiceVolume) {
  const auto e1 = Multivector::basis(4, {e4, e5}) + Multivector::basis(4, {e6, e7});
  const auto sq = wedge(e1, e1);
  EXPECT_DOUBLE_EQ(sq.get({e4, e5, e6, e7}), 2.0);
}

TEST(Wedge, RejectsDimensionMismatch) {
  EXPECT_THROW(wedge(Multivector(4, 1), Multivector(7, 1)), DimensionError);
  EXPECT_THROW(Multivector(4, 1) + Multivector(4, 2), DimensionError);
}

TEST(Wedge, AlgebraLawsOnRandomTriples) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 7;
  for (int ka = 0; ka <= 3; ++ka) {
    for (int kb = 0; kb <= 3; ++kb) {
      double worst = 0.0;
      for (int trial = 0; trial < 200; ++trial) {
        const auto a = randomForm(n, ka, rng);
        const auto b = randomForm(n, kb, rng);
        const auto c = randomForm(n, 1, rng);
        const auto b2 = randomForm(n, kb, rng);
        const double s = u(rng);
        const double sign = ((ka * kb) % 2 == 0) ? 1.0 : -1.0;
        worst = std::max(worst, maxAbs(wedge(a, b) - sign * wedge(b, a)));
        worst = std::max(worst, maxAbs(wedge(wedge(a, b), c) - wedge(a, wedge(b, c))));
        worst = std::max(worst, maxAbs(wedge(a, b + s * b2) - wedge(a, b) - s * wedge(a, b2)));
        if (ka % 2 == 1) worst = std::max(worst, maxAbs(wedge(a, a)));
      }
      EXPECT_LT(worst, 1e-12) << "degrees " << ka << "," << kb;
    }
  }
}

TEST(Hodge, EuclideanFourSpace) {
  const auto e45 = Multivector::basis(4, {e4, e5});
  const auto e67 = Multivector::basis(4, {e6, e7});
  EXPECT_LT(maxAbs(hodge(e45) - e67), 1e-15);
  EXPECT_LT(maxAbs(hodge(e45 + e67) - (e45 + e67)), 1e-15);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto a = randomForm(4, 2, rng);
    EXPECT_LT(maxAbs(hodge(hodge(a)) - a), 1e-14);
  }
}

TEST(Hodge, DefiningIdentityAndIsometryWithDiagonalMetric) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.3, 3.0);
  for (int n : {4, 7}) {
    for (int k = 0; k <= n; ++k) {
      for (int t = 0; t < 20; ++t) {
        std::vector<double> g(n);
        for (auto& x : g) x = pos(rng);
        double vol = 1.0;
        for (double x : g) vol *= x;
        const auto a = randomForm(n, k, rng);
        const auto b = randomForm(n, k, rng);
        const auto lhs = wedge(a, hodge(b, g));
        EXPECT_NEAR(lhs[0], inner(a, b, g) * std::sqrt(vol), 1e-12 * std::max(1.0, std::abs(lhs[0])));
        EXPECT_NEAR(inner(hodge(a, g), hodge(b, g), g), inner(a, b, g),
                    1e-12 * std::max(1.0, std::abs(inner(a, b, g))));
      }
    }
  }
}

TEST(Hodge, RejectsNonPositiveMetric) {
  const std::vector<double> g{1.0, -1.0, 1.0, 1.0};
  EXPECT_THROW(hodge(Multivector::basis(4, {0, 1}), g), std::invalid_argument);
}

TEST(Interior, BasisCases) {
  const auto e45 = Multivector::basis(4, {e4, e5});
  const std::array<double, 4> v4{1, 0, 0, 0}, v6{0, 0, 1, 0};
  EXPECT_LT(maxAbs(interior(v4, e45) - Multivector::basis(4, {e5})), 1e-15);
  EXPECT_LT(maxAbs(interior(v6, e45)), 1e-15);
}

TEST(Interior, NilpotentAntiderivation) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> v(7);
    for (auto& x : v) x = u(rng);
    const auto a = randomForm(7, 2, rng);
    const auto b = randomForm(7, 3, rng);
    EXPECT_LT(maxAbs(interior(v, interior(v, b))), 1e-13);
    const auto lhs = interior(v, wedge(a, b));
    const auto rhs = wedge(interior(v, a), b) + wedge(a, interior(v, b));
    EXPECT_LT(maxAbs(lhs - rhs), 1e-13);
  }
}

TEST(CheckHat, RoundTripsAndProductIdentity) {
  std::mt19937_64 rng(21);
  using MF = MatrixForm<double>;
  const auto a1 = randomForm(7, 1, rng), a2 = randomForm(7, 1, rng), a3 = randomForm(7, 1, rng);
  const auto d1 = randomForm(7, 1, rng), d2 = randomForm(7, 1, rng), d3 = randomForm(7, 1, rng);
  const auto alpha = MF::row({a1, a2, a3});
  const auto delta = MF::row({d1, d2, d3});
  const auto back = hat(check(alpha));
  for (int j = 0; j < 3; ++j) EXPECT_LT(maxAbs(back(0, j) - alpha(0, j)), 1e-15);

  const auto c = check(alpha);
  EXPECT_LT(maxAbs(c(0, 1) + a3), 1e-15);
  EXPECT_LT(maxAbs(c(0, 2) - a2), 1e-15);
  EXPECT_LT(maxAbs(c(1, 2) + a1), 1e-15);
  EXPECT_LT(skewDefect(c), 1e-15);

  // Direct expansion of the definitions: hat(check(a) check(d)) = (a2 d3, -a1 d3, a1 d2).
  const auto prod = hat(check(alpha) * check(delta));
  EXPECT_LT(maxAbs(prod(0, 0) - wedge(a2, d3)), 1e-14);
  EXPECT_LT(maxAbs(prod(0, 1) + wedge(a1, d3)), 1e-14);
  EXPECT_LT(maxAbs(prod(0, 2) - wedge(a1, d2)), 1e-14);

  // check(hat(A)) = A only for skew A.
  MF nonSkew(3, 3, 7, 1);
  nonSkew(0, 1) = a1;
  nonSkew(1, 0) = a1;
  const auto rebuilt = check(hat(nonSkew));
  EXPECT_GT(maxAbs(rebuilt(0, 1) - nonSkew(0, 1)), 0.1);
  const auto skewRebuilt = check(hat(c));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_LT(maxAbs(skewRebuilt(i, j) - c(i, j)), 1e-15);

  EXPECT_THROW(check(MF::row({a1, a2})), DimensionError);
  EXPECT_THROW(hat(MF(2, 3, 7, 1)), DimensionError);
}

TEST(MatrixForm, ProductConventionOnHandExpandedTwoByTwo) {
  using MF = MatrixForm<double>;
  const auto x = Multivector::basis(4, {0}), y = Multivector::basis(4, {1});
  const auto z = Multivector::basis(4, {2}), w = Multivector::basis(4, {3});
  MF a(2, 2, 4, 1), b(2, 2, 4, 1);
  a(0, 0) = x;
  a(0, 1) = y;
  a(1, 0) = z;
  a(1, 1) = w;
  b(0, 0) = y;
  b(0, 1) = z;
  b(1, 0) = w;
  b(1, 1) = x;
  const auto ab = a * b;
  // (AB)(0,0) = x^y + y^w ; (AB)(1,1) = z^z + w^x = -x^w
  EXPECT_LT(maxAbs(ab(0, 0) - (wedge(x, y) + wedge(y, w))), 1e-15);
  EXPECT_LT(maxAbs(ab(0, 1) - (wedge(x, z) + wedge(y, x))), 1e-15);
  EXPECT_LT(maxAbs(ab(1, 0) - (wedge(z, y) + wedge(w, w))), 1e-15);
  EXPECT_LT(maxAbs(ab(1, 1) + wedge(x, w)), 1e-15);
  EXPECT_THROW(MF(2, 3, 4, 1) * MF(2, 3, 4, 1), DimensionError);
}

// Random polynomial 2-form field on R^4 of total degree 4.
struct PolyField {
  std::array<std::array<double, 6>, 6> c;
  template <class J>
  Form<J> operator()(const std::array<J, 4>& x) const {
    Form<J> f(4, 2);
    for (int s = 0; s < 6; ++s) {
      J m = c[s][0] + c[s][1] * x[0] * x[1] + c[s][2] * x[2] * x[2] * x[3] + c[s][3] * x[0] * x[1] * x[2] * x[3] +
            c[s][4] * x[3] + c[s][5] * x[1] * x[1] * x[1];
      f[s] = m;
    }
    return f;
  }
};

TEST(ExteriorDerivative, ConstantsAndPolynomials) {
  FormField<4> constant(1, [](const auto& x) {
    using J = typename std::decay_t<decltype(x)>::value_type;
    Form<J> f(4, 1);
    f[0] = J(2.0);
    f[3] = J(-1.0);
    return f;
  });
  EXPECT_LT(maxAbs(dform(constant, {0.3, 0.1, 0.2, 0.4})), 1e-15);

  FormField<4> x1dx2(1, [](const auto& x) {
    using J = typename std::decay_t<decltype(x)>::value_type;
    Form<J> f(4, 1);
    f.add({1}, x[0]);
    return f;
  });
  const auto dv = dform(x1dx2, {0.7, -0.3, 0.2, 0.1});
  EXPECT_DOUBLE_EQ(dv.get({0, 1}), 1.0);
  EXPECT_LT(maxAbs(dv - Multivector::basis(4, {0, 1})), 1e-15);
}

TEST(ExteriorDerivative, NilpotentAndLeibnizOnRandomPolynomialFields) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    PolyField pa, pb;
    for (auto& r : pa.c)
      for (auto& v : r) v = u(rng);
    for (auto& r : pb.c)
      for (auto& v : r) v = u(rng);
    FormField<4> a(2, pa), b(2, pb);
    const Point<4> p{u(rng), u(rng), u(rng), u(rng)};
    const auto dd = dform(d(a), p);
    EXPECT_LT(maxAbs(dd), 1e-12);
    const auto ab = wedge(a, b);
    const auto lhs = dform(ab, p);
    const auto rhs = wedge(dform(a, p), b(p)) + wedge(a(p), dform(b, p));
    EXPECT_LT(maxAbs(lhs - rhs), 1e-12);
  }
}

TEST(ExteriorDerivative, AgreesWithCentralDifferences) {
  auto field = FormField<4>(1, [](const auto& x) {
    using J = typename std::decay_t<decltype(x)>::value_type;
    Form<J> f(4, 1);
    for (int i = 0; i < 4; ++i) f[combin::rank(1u << i)] = sin(x[i] * x[(i + 1) % 4]) + exp(0.3 * x[(i + 2) % 4]);
    return f;
  });
  const Point<4> p{0.2, -0.4, 0.5, 0.1};
  const auto exact = dform(field, p);
  const double h = 1e-5;
  Multivector fd(4, 2);
  for (int v = 0; v < 4; ++v) {
    auto pp = p, pm = p;
    pp[v] += h;
    pm[v] -= h;
    const auto diff = (field(pp) - field(pm)) * (1.0 / (2 * h));
    fd += wedge(Multivector::basis(4, {v}), diff);
  }
  EXPECT_LT(maxAbs(exact - fd), 1e-5);
}

TEST(ExteriorDerivative, ReportsMissingJetOrder) {
  FormField<4> shallow(0, [](const auto& x) { return Form<typename std::decay_t<decltype(x)>::value_type>::scalar(4, x[0]); },
                       1);
  EXPECT_NO_THROW(dform(shallow, {0, 0, 0, 0}));
  try {
    dform(d(shallow), {0, 0, 0, 0});
    FAIL() << "expected JetOrderError";
  } catch (const JetOrderError& e) {
    EXPECT_EQ(e.requested(), 1);
    EXPECT_EQ(e.available(), 0);
  }
}

}  // namespace
