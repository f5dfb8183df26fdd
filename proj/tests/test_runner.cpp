#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "g2frames/runner.hpp"

using namespace g2frames;
using nlohmann::json;

namespace {

json readConfig(const std::string& name) {
  std::ifstream in(std::string(G2FRAMES_SOURCE_DIR) + "/tools/configs/" + name);
  EXPECT_TRUE(in.good()) << name;
  return json::parse(in);
}

std::string errorKey(const json& j) {
  try {
    configFromJson(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<accepted>";
}

json validX() {
  return json::parse(R"({"model": {"name": "sphere4"}, "space": "X", "branch": "-",
                         "profile": {"kind": "bs", "s": 1, "c0": 1, "c1": 1}})");
}

}  // namespace

TEST(RunConfig, RoundTrip) {
  for (const char* name : {"sphere4_bs.json", "hyperbolic4_p_w3.json", "flat_x.json"}) {
    const auto c = configFromJson(readConfig(name));
    const auto j = toJson(c);
    EXPECT_EQ(configFromJson(j), c) << name;
    EXPECT_EQ(toJson(configFromJson(j)), j) << name;
  }
  RunConfig c;
  c.model = "fubiniStudy";
  c.space = "X";
  c.branch = Branch::Plus;
  c.profile.kind = "table";
  c.profile.r = {0.0, 1.0, 2.0};
  c.profile.lambdaTable = {1.0, 1.1, 1.3};
  c.profile.muTable = {1.0, 0.9, 0.8};
  c.probes = 7;
  c.seed = 99;
  c.tol.residual = 1e-9;
  c.suites = {"frame-calculus", "torsion-X-closed-vs-numeric"};
  c.report = "out.json";
  EXPECT_EQ(configFromJson(toJson(c)), c);

  c.profile = ProfileSpec{};
  c.profile.kind = "bs";
  c.profile.s = -1.0;
  c.profile.r0 = 0.5;
  c.model = "hyperbolic4";
  EXPECT_EQ(configFromJson(toJson(c)), c);
}

TEST(RunConfig, ErrorsNameTheKey) {
  auto j = validX();
  j["probs"] = 3;
  EXPECT_EQ(errorKey(j), "probs");

  j = validX();
  j["model"]["name"] = "torus";
  EXPECT_EQ(errorKey(j), "model.name");

  j = validX();
  j["model"]["kappa"] = -1.0;
  EXPECT_EQ(errorKey(j), "model.kappa");

  j = validX();
  j["space"] = "Y";
  EXPECT_EQ(errorKey(j), "space");

  j = validX();
  j["branch"] = "up";
  EXPECT_EQ(errorKey(j), "branch");

  j = validX();
  j["profile"]["c0"] = "one";
  EXPECT_EQ(errorKey(j), "profile.c0");

  j = validX();
  j["profile"].erase("c1");
  EXPECT_EQ(errorKey(j), "profile.c1");

  j = validX();
  j["profile"]["kind"] = "spline";
  EXPECT_EQ(errorKey(j), "profile.kind");

  j = validX();
  j["profile"]["extra"] = 1;
  EXPECT_EQ(errorKey(j), "profile.extra");

  j = validX();
  j["space"] = "P";
  EXPECT_EQ(errorKey(j), "profile.kind");

  j = validX();
  j["probes"] = 0;
  EXPECT_EQ(errorKey(j), "probes");

  j = validX();
  j["probes"] = 2.5;
  EXPECT_EQ(errorKey(j), "probes");

  j = validX();
  j["seed"] = -4;
  EXPECT_EQ(errorKey(j), "seed");

  j = validX();
  j["tolerances"] = {{"residual", 0.0}};
  EXPECT_EQ(errorKey(j), "tolerances.residual");

  j = validX();
  j["tolerances"] = {{"resid", 1e-8}};
  EXPECT_EQ(errorKey(j), "tolerances.resid");

  j = validX();
  j["suites"] = {"identities-P"};
  EXPECT_EQ(errorKey(j), "suites");

  j = validX();
  j["suites"] = {"no-such-suite"};
  EXPECT_EQ(errorKey(j), "suites");

  j = validX();
  j["profile"] = {{"kind", "constant"}, {"lambda", -1.0}, {"mu", 1.0}};
  EXPECT_EQ(errorKey(j), "profile");

  EXPECT_EQ(errorKey(json::array()), "(root)");
  EXPECT_EQ(errorKey(validX()), "<accepted>");
}

TEST(RunConfig, ProfileOutsideChartIsAConfigError) {
  // A table starting at r = 1 does not cover the zero section.
  auto j = validX();
  j["profile"] = {{"kind", "table"}, {"r", {1.0, 2.0}}, {"lambda", {1.0, 1.0}}, {"mu", {1.0, 1.0}}};
  const auto c = configFromJson(j);
  try {
    run(c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "profile");
  }
}

TEST(Run, SphereBryantSalamonIsParallel) {
  const auto rep = run(configFromJson(readConfig("sphere4_bs.json")));
  EXPECT_TRUE(rep.pass) << rep.format(true);
  EXPECT_EQ(rep.torsionLabel, "parallel");
  for (double n : rep.torsionMax) EXPECT_LT(n, 1e-6);
}

TEST(Run, HyperbolicPIsPureW3) {
  const auto rep = run(configFromJson(readConfig("hyperbolic4_p_w3.json")));
  EXPECT_TRUE(rep.pass) << rep.format(true);
  EXPECT_LT(rep.torsionMax[0], 1e-8);
  EXPECT_GT(rep.torsionMax[3], 1e-3);
  EXPECT_NE(rep.torsionLabel.find("pure W3"), std::string::npos) << rep.torsionLabel;
  EXPECT_EQ(rep.environment["conventions"]["frameRotation"], "right-transposed");
}

TEST(Run, FlatIsParallel) {
  const auto rep = run(configFromJson(readConfig("flat_x.json")));
  EXPECT_TRUE(rep.pass) << rep.format(true);
  EXPECT_EQ(rep.torsionLabel, "parallel");
}

TEST(Run, ReportCarriesConventionsAndAnchors) {
  const auto rep = run(configFromJson(readConfig("sphere4_bs.json")));
  const auto j = rep.toJson();
  for (const char* k : {"config", "environment", "records", "torsion", "pass"}) EXPECT_TRUE(j.contains(k)) << k;
  const auto& conv = j["environment"]["conventions"];
  EXPECT_EQ(conv["curvatureSign"], 1);
  EXPECT_EQ(conv["orientationFlipped"], false);
  EXPECT_TRUE(j["environment"].contains("probeDomain"));
  std::set<std::string> anchors;
  for (const auto& s : suiteCatalog()) anchors.insert(s.anchor);
  for (const auto& r : j["records"]) {
    EXPECT_TRUE(anchors.count(r["anchor"].get<std::string>())) << r.dump();
    EXPECT_TRUE(r.contains("maxResidual"));
  }
}

TEST(Run, OverallPassIsConjunction) {
  auto c = configFromJson(readConfig("sphere4_bs.json"));
  c.suites = {"frame-calculus", "model-flags"};
  auto rep = run(c);
  EXPECT_TRUE(rep.pass);
  std::set<std::string> suites;
  for (const auto& r : rep.records) suites.insert(r.suite);
  EXPECT_EQ(suites, (std::set<std::string>{"frame-calculus", "model-flags"}));

  // A non-Einstein base with a profile that keeps tau3 visible: the Einstein
  // witness must flip to the lower-bound form and still pass.
  c = configFromJson(json::parse(R"({"model": "productS2H2", "space": "X", "branch": "+",
                                     "profile": {"kind": "constant", "lambda": 1, "mu": 1},
                                     "suites": ["einstein-tau3-X"]})"));
  rep = run(c);
  ASSERT_EQ(rep.records.size(), 1u);
  EXPECT_EQ(rep.records[0].relation, ">=");
  EXPECT_TRUE(rep.pass) << rep.format(false);

  // An impossible tolerance makes the run fail and pass = false.
  c = configFromJson(readConfig("sphere4_bs.json"));
  c.suites = {"torsion-X-closed-vs-numeric"};
  c.tol.torsion = 1e-300;
  c.tol.residual = 1e-300;
  rep = run(c);
  EXPECT_FALSE(rep.pass);
}

TEST(Run, HypothesisFailureIsNotApplicable) {
  // fubiniStudy on the + branch: the opposite block carries W+, so the
  // closed-form torsion is not available.
  const auto c = configFromJson(json::parse(R"({"model": "fubiniStudy", "space": "X", "branch": "+",
                                                "profile": {"kind": "constant", "lambda": 1, "mu": 1},
                                                "probes": 4, "suites": ["torsion-X-closed-vs-numeric"]})"));
  const auto rep = run(c);
  const auto it = std::find_if(rep.records.begin(), rep.records.end(), [](auto& r) { return !r.applicable; });
  ASSERT_NE(it, rep.records.end()) << rep.format(false);
  EXPECT_NE(it->note.find("W+"), std::string::npos) << it->note;
}

TEST(Run, DeterministicAcrossExecutionModes) {
  for (const char* name : {"sphere4_bs.json", "hyperbolic4_p_w3.json"}) {
    auto c = configFromJson(readConfig(name));
    c.probes = 24;
    const auto a = run(c, Execution::Parallel).toJson().dump(2);
    const auto b = run(c, Execution::Sequential).toJson().dump(2);
    const auto a2 = run(c, Execution::Parallel).toJson().dump(2);
    EXPECT_EQ(a, b) << name;
    EXPECT_EQ(a, a2) << name;
  }
}

TEST(Run, SeedChangesProbesOnly) {
  auto c = configFromJson(readConfig("flat_x.json"));
  c.suites = {"frame-calculus"};
  auto c2 = c;
  c2.seed = 2;
  const auto a = run(c).toJson();
  const auto b = run(c2).toJson();
  EXPECT_EQ(a["environment"]["seed"], 1);
  EXPECT_EQ(b["environment"]["seed"], 2);
  EXPECT_EQ(a["records"].size(), b["records"].size());
}

TEST(Suites, CatalogListing) {
  const auto text = listSuites();
  for (const char* id : {"cocalibration-P", "torsion-X-closed-vs-numeric", "radial-incompleteness", "frame-calculus",
                         "lemma-two-of-three", "corollaries-P"})
    EXPECT_NE(text.find(std::string(id) + " ["), std::string::npos) << id;
  std::set<std::string> ids;
  for (const auto& s : suiteCatalog()) {
    EXPECT_TRUE(ids.insert(s.id).second) << s.id;
    EXPECT_FALSE(s.anchor.empty());
    EXPECT_TRUE(s.space == "X" || s.space == "P" || s.space == "any");
  }
}

TEST(Parallel, RethrowsLowestFailingIndex) {
  auto fn = [](int i) -> int {
    if (i == 5 || i == 9) throw std::runtime_error(std::to_string(i));
    return i * i;
  };
  for (auto mode : {Execution::Sequential, Execution::Parallel}) {
    try {
      parallelMap(16, fn, mode);
      FAIL();
    } catch (const std::runtime_error& e) {
      EXPECT_STREQ(e.what(), "5");
    }
  }
  const auto v = parallelMap(100, [](int i) { return i * i; }, Execution::Parallel);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(v[i], i * i);
}
