// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "g2frames/bundle7.hpp"
#include "g2frames/frames4.hpp"
#include "g2frames/models.hpp"
#include "g2frames/runner.hpp"

using namespace g2frames;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

const std::vector<std::string> kModels{"flat", "sphere4", "hyperbolic4", "fubiniStudy", "complexHyperbolic",
                                       "productS2H2"};

Outcome frameCalculus() {
  const auto t0 = Clock::now();
  double cartan = 0, bianchi = 0, asym = 0, trace = 0;
  for (const auto& name : kModels) {
    const auto m = getModel(name);
    const auto xs = probePoints(m, 50, 11);
    const auto geo = parallelMap(50, [&](int i) { return analyzePoint(m.metric, xs[i], m.orientation); },
                                 Execution::Parallel);
    for (const auto& g : geo) {
      cartan = std::max(cartan, g.cartanResidual);
      bianchi = std::max(bianchi, g.bianchiResidual);
      asym = std::max({asym, g.asymmetryA, g.asymmetryC});
      trace = std::max(trace, g.traceGap);
    }
  }
  const double t = since(t0);
  Outcome o;
  o.pass = cartan < 1e-8 && bianchi < 1e-8 && asym < 1e-8 && trace < 1e-8 && t < 10.0;
  o.detail = (Detail() << "6 models x 50 points: cartan " << cartan << ", bianchi " << bianchi << ", A/C asymmetry "
                       << asym << ", |trA - trC| " << trace << ", " << t << " s (< 10 s)")
                 .str();
  return o;
}

Outcome modelFlags() {
  int mismatches = 0;
  double sSphere = 0, sHyper = 0;
  for (const auto& row : expectedTable()) {
    const auto m = getModel(row.name);
    for (const auto& x : probePoints(m, 20, 12)) {
      const auto f = predicates(analyzePoint(m.metric, x, m.orientation).st, 1e-7);
      const auto& e = row.flags;
      mismatches += (f.einstein != e.einstein) + (f.sd != e.sd) + (f.asd != e.asd) +
                    (f.scalarFlat != e.scalarFlat) + (f.sSign != e.sSign);
      if (row.name == "sphere4") sSphere = std::max(sSphere, std::abs(f.s - 1.0));
      if (row.name == "hyperbolic4") sHyper = std::max(sHyper, std::abs(f.s + 1.0));
    }
  }
  Outcome o;
  o.pass = mismatches == 0 && sSphere < 1e-7 && sHyper < 1e-7;
  o.detail = (Detail() << mismatches << " flag mismatches over 6 models x 20 points; |s - 1| sphere4 " << sSphere
                       << ", |s + 1| hyperbolic4 " << sHyper)
                 .str();
  return o;
}

Outcome metricFromPhiCheck() {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.5, 2.0);
  double gramErr = 0, mErr = 0;
  int split = 0, trials = 0;
  for (int k = 0; k < 50; ++k) {
    const double l = U(rng), mu = U(rng);
    for (auto b : {Branch::Plus, Branch::Minus}) {
      const auto s = standardPhi(l, mu, b);
      const auto r = metricFromPhi(s.phi);
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
          const double want = i != j ? 0.0 : (i < 3 ? l * l : mu * mu);
          gramErr = std::max(gramErr, std::abs(r.gram(i, j) - want));
        }
      mErr = std::max(mErr, std::abs(r.m - l * l * l * mu * mu * mu * mu));

      const auto e = dualityForms(b, 7, 3);
      Multivector phi = (l * l * l) * Multivector::basis(7, {0, 1, 2});
      for (int i = 0; i < 3; ++i) {
        const double flip = i == 2 ? -1.0 : 1.0;
        phi -= (sign(b) * flip * l * mu * mu) * wedge(Multivector::basis(7, {i}), e[i]);
      }
      split += metricFromPhi(phi).split();
      ++trials;
    }
  }
  Outcome o;
  o.pass = gramErr < 1e-10 && mErr < 1e-10 && split == trials;
  o.detail = (Detail() << "50 random (lambda, mu) on both branches: gram error " << gramErr << ", |m - l^3 mu^4| "
                       << mErr << "; flipped phi split (3,4) in " << split << "/" << trials)
                 .str();
  return o;
}

Outcome xTorsion() {
  const std::vector<std::pair<std::string, Branch>> cases{
      {"sphere4", Branch::Minus},     {"hyperbolic4", Branch::Minus}, {"fubiniStudy", Branch::Minus},
      {"complexHyperbolic", Branch::Minus}, {"flat", Branch::Plus},   {"productS2H2", Branch::Plus}};
  double diff = 0, tau0 = 0, consistency = 0;
  int evaluations = 0, hypothesisFailures = 0;
  std::uint64_t seed = 100;
  for (const auto& [name, branch] : cases) {
    const auto m = getModel(name);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 10; ++k) {
      const auto profile = randomProfile(rng);
      const auto chart = buildChartX(m, branch, profile);
      const auto xs = probePoints(m, 20, seed + 1 + k);
      const auto as = fibreProbesX(profile, 20, seed + 50 + k);
      struct R {
        double d = 0, t0 = 0, c = 0;
        bool ok = true;
      };
      const auto rs = parallelMap(20, [&](int i) {
        R r;
        const auto p = evaluateX(chart, xs[i], as[i]);
        const auto t = torsionXNumeric(p);
        r.t0 = std::abs(t.tau0);
        r.c = std::max(t.residualPhi, t.residualPsi);
        try {
          const auto c = torsionXClosed(p, profile, branch);
          r.d = std::max({std::abs(t.tau0 - c.tau0), maxAbs(t.tau1 - c.tau1), maxAbs(t.tau2 - c.tau2),
                          maxAbs(t.tau3 - c.tau3)});
        } catch (const DualityHypothesisError&) {
          r.ok = false;
        }
        return r;
      }, Execution::Parallel);
      for (const auto& r : rs) {
        diff = std::max(diff, r.d);
        tau0 = std::max(tau0, r.t0);
        consistency = std::max(consistency, r.c);
        hypothesisFailures += !r.ok;
        ++evaluations;
      }
    }
    seed += 1000;
  }
  Outcome o;
  o.pass = diff < 1e-6 && tau0 < 1e-8 && consistency < 1e-8 && hypothesisFailures == 0;
  o.detail = (Detail() << evaluations << " evaluations (6 models x 10 profiles x 20 points): max closed - numeric "
                       << diff << ", max |tau0| " << tau0 << ", decomposition residual " << consistency
                       << ", hypothesis failures " << hypothesisFailures)
                 .str();
  return o;
}

Outcome bryantSalamon() {
  struct Case {
    std::string model;
    Profile profile;
  };
  const std::vector<Case> cases{{"sphere4", bsProfile(1.0, 1.0, 1.0)},
                                {"fubiniStudy", bsProfile(1.0, 0.8, 1.5)},
                                {"hyperbolic4", bsProfileOnDisk(-1.0, 1.0, 0.5)},
                                {"complexHyperbolic", bsProfileOnDisk(-1.0, 1.2, 0.8)}};
  double worst = 0;
  Detail d;
  for (const auto& c : cases) {
    const auto m = getModel(c.model);
    const auto chart = buildChartX(m, Branch::Minus, c.profile);
    const auto xs = probePoints(m, 20, 21);
    const auto as = fibreProbesX(c.profile, 20, 22);
    const auto norms = parallelMap(20, [&](int i) { return torsionXNumeric(evaluateX(chart, xs[i], as[i])).norms(); },
                                   Execution::Parallel);
    double mx = 0;
    for (const auto& n : norms)
      for (double v : n) mx = std::max(mx, v);
    worst = std::max(worst, mx);
    d << c.model << " " << c.profile.describe() << ": " << mx << "; ";
  }
  Outcome o;
  o.pass = worst < 1e-6;
  o.detail = (d << "max over all tau norms " << worst << " (< 1e-6)").str();
  return o;
}

Outcome lemma() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> S(-2.0, 2.0), C(0.5, 2.0);
  double worst = 0, enforced = 0;
  for (int k = 0; k < 20; ++k) {
    const double s = S(rng), c0 = C(rng), c1 = C(rng);
    for (const auto& c : lemmaCheck(s, c0, c1, 100)) {
      worst = std::max(worst, c.measuredResidual);
      enforced = std::max(enforced, c.enforcedResidual);
    }
  }
  Outcome o;
  o.pass = worst < 1e-8 && enforced < 1e-8;
  o.detail = (Detail() << "20 random (s, c0, c1) x 3 pairs x 100 radii: third condition " << worst
                       << ", enforced pair " << enforced)
                 .str();
  return o;
}

Outcome pHeadline() {
  double dpsi = 0, dphiMin = 1e300, tau0 = 0;
  int runs = 0;
  const std::vector<std::pair<double, double>> lm{{1.0, 1.0}, {0.7, 1.6}, {1.5, 0.9}};
  for (const auto& name : kModels) {
    const auto m = getModel(name);
    const auto xs = probePoints(m, 10, 41);
    const auto us = fibreProbesP(10, 42);
    for (auto b : {Branch::Plus, Branch::Minus}) {
      for (const auto& [l, mu] : lm) {
        const auto chart = buildChartP(m, b, l, mu);
        const auto rs = parallelMap(10, [&](int i) {
          const auto p = evaluateP(chart, xs[i], us[i]);
          const auto t = torsionPNumeric(p);
          const double s = p.st.scal / 12.0;
          const double closed = sign(b) * 6.0 / (7.0 * l * mu * mu) * (mu * mu + 2.0 * s * l * l);
          return std::array<double, 3>{maxAbs(p.dpsi), maxAbs(p.dphi), std::abs(t.tau0 - closed)};
        }, Execution::Parallel);
        for (const auto& r : rs) {
          dpsi = std::max(dpsi, r[0]);
          dphiMin = std::min(dphiMin, r[1]);
          if (m.expected.sConstant) tau0 = std::max(tau0, r[2]);
        }
        ++runs;
      }
    }
  }
  Outcome o;
  o.pass = dpsi < 1e-9 && dphiMin > 1e-3 && tau0 < 1e-8;
  o.detail = (Detail() << runs << " (model, branch, lambda, mu) runs x 10 points: max |dpsi| " << dpsi
                       << ", min |dphi| " << dphiMin << ", tau0 closed vs numeric " << tau0)
                 .str();
  return o;
}

Outcome corollaries() {
  const auto us = fibreProbesP(10, 52);
  double nearly = 0, w3tau0 = 0, w3tau3 = 0;
  bool labels = true;
  {
    const double l = 0.9, mu = std::sqrt(5.0) * l;
    const auto m = getModel("sphere4");
    const auto chart = buildChartP(m, Branch::Minus, l, mu);
    const auto xs = probePoints(m, 10, 51);
    for (int i = 0; i < 10; ++i) {
      const auto p = evaluateP(chart, xs[i], us[i]);
      nearly = std::max(nearly, maxAbs(p.dphi + (6.0 / (5.0 * l)) * p.psi));
    }
  }
  for (auto b : {Branch::Plus, Branch::Minus}) {
    const double l = 1.0, mu = std::sqrt(2.0);
    const auto m = getModel("hyperbolic4");
    const auto chart = buildChartP(m, b, l, mu);
    const auto xs = probePoints(m, 10, 53);
    const auto beta = Multivector::basis(7, {0, 1, 2});
    for (int i = 0; i < 10; ++i) {
      const auto p = evaluateP(chart, xs[i], us[i]);
      const auto t = torsionPNumeric(p);
      w3tau0 = std::max(w3tau0, std::abs(t.tau0));
      w3tau3 = std::max(w3tau3, maxAbs(t.tau3 - (sign(b) / (2.0 * l)) * (p.phi - (7.0 * l * l * l) * beta)));
      labels = labels && classify(t, 1e-7).label.rfind("pure W3", 0) == 0;
    }
  }
  Outcome o;
  o.pass = nearly < 1e-8 && w3tau0 < 1e-8 && w3tau3 < 1e-8 && labels;
  o.detail = (Detail() << "P- sphere4 mu^2 = 5 lambda^2: |dphi + 6/(5 lambda) psi| " << nearly
                       << "; P+- hyperbolic4 mu^2 = 2 lambda^2: |tau0| " << w3tau0 << ", tau3 vs (phi - 7 lambda^3 beta)/(2 lambda) "
                       << w3tau3 << ", pure W3 label " << (labels ? "yes" : "no"))
                 .str();
  return o;
}

Outcome incompleteness() {
  double oracleGap = 0;
  bool converged = true;
  for (const auto& [s, c0, r0] : std::vector<std::array<double, 3>>{{-1, 1, 0.5}, {-0.5, 1.3, 1.2}, {-2, 0.7, 0.3}}) {
    const auto p = bsProfileOnDisk(s, c0, r0);
    const auto q = radiusLength(p, 1e-8);
    converged = converged && q.converged;
    oracleGap = std::max(oracleGap, std::abs(q.value - radiusLengthMidpoint(p, 1000000)));
  }
  const double r0 = 0.5, g0 = 0.4;
  const auto tr = verticalGeodesic(r0, g0, 0.0, 3.0, 1000);
  double drift = 0;
  for (double g : tr.g) drift = std::max(drift, std::abs(g - g0));
  Outcome o;
  o.pass = converged && oracleGap < 1e-6 && drift == 0.0;
  o.detail = (Detail() << "3 disk profiles: converged " << (converged ? "yes" : "no") << ", |quadrature - oracle| "
                       << oracleGap << "; geodesic equilibrium drift " << drift)
                 .str();
  return o;
}

Outcome determinism(Clock::time_point start) {
  bool same = true;
  for (const auto& name : kModels) {
    for (const char* space : {"X", "P"}) {
      RunConfig c;
      c.model = name;
      c.space = space;
      c.branch = Branch::Minus;
      c.profile.kind = "constant";
      c.profile.lambda = 1.0;
      c.profile.mu = 1.2;
      c.probes = 16;
      c.seed = 61;
      const auto a = run(c, Execution::Parallel).toJson().dump();
      const auto b = run(c, Execution::Sequential).toJson().dump();
      const auto a2 = run(c, Execution::Parallel).toJson().dump();
      same = same && a == b && a == a2;
    }
  }
  const double total = since(start);
  Outcome o;
  o.pass = same && total < 60.0;
  o.detail = (Detail() << "12 full-suite configs x (parallel, sequential, repeat): identical JSON "
                       << (same ? "yes" : "no") << "; acceptance wall-clock " << total << " s (< 60 s)")
                 .str();
  return o;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"frame-calculus soundness", frameCalculus},
      {"model flag table", modelFlags},
      {"metric from phi", metricFromPhiCheck},
      {"X torsion theorem", xTorsion},
      {"Bryant-Salamon parallelism", bryantSalamon},
      {"lemma two-of-three", lemma},
      {"P cocalibrated, never calibrated; tau0", pHeadline},
      {"P corollaries", corollaries},
      {"radial incompleteness", incompleteness},
      {"determinism and runtime", [start] { return determinism(start); }},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
