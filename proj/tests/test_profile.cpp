#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "g2frames/profile.hpp"

namespace {

using namespace g2frames;

TEST(Profile, BryantSalamonExamples) {
  const auto p = bsProfile(1.0, 1.0, 1.0);
  for (double r : {0.0, 0.3, 2.0, 7.5}) {
    const auto v = p.values(r);
    EXPECT_NEAR(v.mu * v.mu, std::sqrt(2 * r + 1), 1e-14);
    EXPECT_NEAR(v.lambda * v.lambda, 1.0 / std::sqrt(2 * r + 1), 1e-14);
    EXPECT_NEAR(v.lambda * v.mu, 1.0, 1e-14);
  }
  EXPECT_NEAR(p.values(0).lambda, 1.0, 1e-15);
  EXPECT_NEAR(p.values(0).mu, 1.0, 1e-15);
  EXPECT_TRUE(std::isinf(p.rMax()));

  const auto d = bsProfileOnDisk(-1.0, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(d.c1, 4.0);
  EXPECT_DOUBLE_EQ(d.rMax(), 2.0);
  EXPECT_TRUE(d.contains(1.99));
  EXPECT_FALSE(d.contains(2.0));
}

TEST(Profile, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::vector<Profile> ps{bsProfile(0.7, 1.3, 0.4), bsProfile(-0.5, 0.8, 2.0), tauTwoZeroProfile(-1.0, 1.2, 3.0),
                          randomProfile(rng), tableProfile({0, 0.5, 1, 1.5, 2}, {1, 1.1, 1.3, 1.2, 1.0}, {1, 0.9, 0.95, 1.1, 1.4})};
  const double h = 1e-5;
  for (const auto& p : ps) {
    for (double r : {0.2, 0.7, 1.1}) {
      const auto v = p.values(r);
      EXPECT_NEAR(v.dlambda, (p.values(r + h).lambda - p.values(r - h).lambda) / (2 * h), 1e-5) << p.describe();
      EXPECT_NEAR(v.dmu, (p.values(r + h).mu - p.values(r - h).mu) / (2 * h), 1e-5) << p.describe();
    }
  }
}

TEST(Profile, RejectsBadParameters) {
  EXPECT_THROW(bsProfile(1.0, 0.0, 1.0), ProfileDomainError);
  EXPECT_THROW(bsProfile(-1.0, 1.0, 0.0), ProfileDomainError);
  EXPECT_THROW(bsProfile(0.0, 1.0, -1.0), ProfileDomainError);
  EXPECT_NO_THROW(bsProfile(1.0, 1.0, -1.0));  // domain r > 1/2
  EXPECT_THROW(constantProfile(0.0, 1.0), ProfileDomainError);
  EXPECT_THROW(tableProfile({0, 1}, {1, -1}, {1, 1}), ProfileDomainError);
  EXPECT_THROW(CubicSpline({0, 0}, {1, 1}), std::invalid_argument);
}

TEST(Profile, SplineInterpolatesKnotsAndCubics) {
  std::vector<double> x, y;
  for (int i = 0; i <= 20; ++i) {
    x.push_back(0.1 * i);
    y.push_back(std::sin(0.1 * i));
  }
  const CubicSpline s(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(s(x[i]), y[i], 1e-14);
  EXPECT_NEAR(s(1.03), std::sin(1.03), 1e-5);
}

TEST(Profile, RadialFactorsVanishForBryantSalamon) {
  for (double s : {1.0, -1.0, 0.3}) {
    const auto p = bsProfile(s, 1.1, 1.5);
    for (double r : {0.0, 0.1, 0.3}) {
      const auto f = radialFactors(p, s, r);
      EXPECT_LT(std::abs(f.tau1), 1e-13);
      EXPECT_LT(std::abs(f.tau2), 1e-13);
      EXPECT_LT(std::abs(f.productRate), 1e-13);
    }
  }
  const auto t = tauTwoZeroProfile(-1.0, 1.0, 2.0);
  const auto f = radialFactors(t, -1.0, 0.2);
  EXPECT_LT(std::abs(f.tau2), 1e-13);
  EXPECT_GT(std::abs(f.tau1), 1e-3);
}

TEST(Profile, LemmaTwoOfThree) {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> S(-2.0, 2.0), C(0.5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double s = S(rng), c0 = C(rng), c1 = C(rng);
    const auto cases = lemmaCheck(s, c0, c1, 100);
    for (const auto& c : cases) {
      EXPECT_LT(c.enforcedResidual, 1e-10) << c.enforced;
      EXPECT_LT(c.measuredResidual, 1e-8) << c.measured << " s=" << s;
    }
  }
}

TEST(Radial, LengthMatchesClosedFormAndOracle) {
  const auto p = bsProfileOnDisk(-1.0, 1.0, 0.5);
  const auto q = radiusLength(p);
  EXPECT_TRUE(q.converged);
  const double exact = std::sqrt(M_PI) * std::tgamma(0.75) / (2.0 * std::tgamma(1.25));
  EXPECT_NEAR(q.value, exact, 1e-7);
  EXPECT_NEAR(q.value, radiusLengthMidpoint(p, 1000000), 1e-6);

  const auto p2 = bsProfileOnDisk(-0.7, 1.4, 1.3);
  EXPECT_NEAR(radiusLength(p2).value, radiusLengthMidpoint(p2, 1000000), 1e-6);
  EXPECT_THROW(radiusLength(bsProfile(1.0, 1.0, 1.0)), ProfileDomainError);
}

TEST(Radial, GeodesicEquilibriumAndFirstIntegral) {
  const auto eq = verticalGeodesic(0.5, 0.3, 0.0, 2.0, 200);
  for (double g : eq.g) EXPECT_EQ(g, 0.3);
  EXPECT_TRUE(eq.stayedInside);

  // g' sqrt(2 r0 - g^2) is conserved
  const double r0 = 0.5;
  const auto tr = verticalGeodesic(r0, 0.0, 0.5, 1.0, 2000);
  const double c = tr.dg[0] * std::sqrt(2 * r0 - tr.g[0] * tr.g[0]);
  for (std::size_t i = 0; i < tr.g.size(); ++i)
    EXPECT_NEAR(tr.dg[i] * std::sqrt(2 * r0 - tr.g[i] * tr.g[i]), c, 1e-9);
  EXPECT_TRUE(tr.stayedInside);
  EXPECT_THROW(verticalGeodesic(0.5, 1.0, 0.0, 1.0, 10), ProfileDomainError);
}

}  // namespace
