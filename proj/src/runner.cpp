#include "g2frames/runner.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "g2frames/bundle7.hpp"
#include "g2frames/frames4.hpp"
#include "g2frames/models.hpp"

namespace g2frames {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

void rejectUnknown(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError(where + it.key(), "unknown key");
}

double number(const json& j, const std::string& key, const std::string& path) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(path + key, "expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& key, const std::string& path) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(path + key, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path + key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::string text(const json& j, const std::string& key, const std::string& path) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(path + key, "expected a string");
  return v.get<std::string>();
}

ProfileSpec profileFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("profile", "expected an object");
  if (!j.contains("kind")) throw ConfigError("profile.kind", "missing");
  ProfileSpec p;
  p.kind = text(j, "kind", "profile.");
  const std::string at = "profile.";
  if (p.kind == "bs") {
    rejectUnknown(j, at, {"kind", "s", "c0", "c1", "r0"});
    for (const char* k : {"s", "c0"})
      if (!j.contains(k)) throw ConfigError(at + k, "missing");
    p.s = number(j, "s", at);
    p.c0 = number(j, "c0", at);
    if (j.contains("c1") == j.contains("r0")) throw ConfigError(at + "c1", "give exactly one of c1 and r0");
    if (j.contains("c1")) p.c1 = number(j, "c1", at);
    if (j.contains("r0")) p.r0 = number(j, "r0", at);
  } else if (p.kind == "constant") {
    rejectUnknown(j, at, {"kind", "lambda", "mu"});
    for (const char* k : {"lambda", "mu"})
      if (!j.contains(k)) throw ConfigError(at + k, "missing");
    p.lambda = number(j, "lambda", at);
    p.mu = number(j, "mu", at);
  } else if (p.kind == "tau2zero") {
    rejectUnknown(j, at, {"kind", "s", "lambda", "c1"});
    for (const char* k : {"s", "lambda", "c1"})
      if (!j.contains(k)) throw ConfigError(at + k, "missing");
    p.s = number(j, "s", at);
    p.lambda = number(j, "lambda", at);
    p.c1 = number(j, "c1", at);
  } else if (p.kind == "table") {
    rejectUnknown(j, at, {"kind", "r", "lambda", "mu"});
    for (const char* k : {"r", "lambda", "mu"})
      if (!j.contains(k)) throw ConfigError(at + k, "missing");
    p.r = numbers(j, "r", at);
    p.lambdaTable = numbers(j, "lambda", at);
    p.muTable = numbers(j, "mu", at);
    if (p.r.size() != p.lambdaTable.size() || p.r.size() != p.muTable.size())
      throw ConfigError(at + "r", "r, lambda and mu must have equal length");
  } else {
    throw ConfigError("profile.kind", "expected bs, constant, tau2zero or table, got '" + p.kind + "'");
  }
  return p;
}

json profileToJson(const ProfileSpec& p) {
  json j;
  j["kind"] = p.kind;
  if (p.kind == "bs") {
    j["s"] = p.s;
    j["c0"] = p.c0;
    if (p.r0)
      j["r0"] = *p.r0;
    else
      j["c1"] = p.c1;
  } else if (p.kind == "constant") {
    j["lambda"] = p.lambda;
    j["mu"] = p.mu;
  } else if (p.kind == "tau2zero") {
    j["s"] = p.s;
    j["lambda"] = p.lambda;
    j["c1"] = p.c1;
  } else {
    j["r"] = p.r;
    j["lambda"] = p.lambdaTable;
    j["mu"] = p.muTable;
  }
  return j;
}

}  // namespace

Profile makeProfile(const ProfileSpec& p) {
  try {
    if (p.kind == "bs") return p.r0 ? bsProfileOnDisk(p.s, p.c0, *p.r0) : bsProfile(p.s, p.c0, p.c1);
    if (p.kind == "constant") return constantProfile(p.lambda, p.mu);
    if (p.kind == "tau2zero") return tauTwoZeroProfile(p.s, p.lambda, p.c1);
    if (p.kind == "table") return tableProfile(p.r, p.lambdaTable, p.muTable);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("profile", e.what());
  }
  throw ConfigError("profile.kind", "unknown profile kind '" + p.kind + "'");
}

json toJson(const RunConfig& c) {
  json j;
  j["model"] = {{"name", c.model}, {"kappa", c.kappa}};
  j["space"] = c.space;
  j["branch"] = toString(c.branch);
  j["profile"] = profileToJson(c.profile);
  j["probes"] = c.probes;
  j["seed"] = c.seed;
  j["tolerances"] = {{"residual", c.tol.residual}, {"torsion", c.tol.torsion}, {"classify", c.tol.classify}};
  if (!c.suites.empty()) j["suites"] = c.suites;
  if (!c.report.empty()) j["report"] = c.report;
  return j;
}

RunConfig configFromJson(const json& j) {
  if (!j.is_object()) throw ConfigError("(root)", "configuration must be a JSON object");
  rejectUnknown(j, "", {"model", "space", "branch", "profile", "probes", "seed", "tolerances", "suites", "report"});
  RunConfig c;
  if (!j.contains("model")) throw ConfigError("model", "missing");
  const auto& m = j.at("model");
  if (m.is_string()) {
    c.model = m.get<std::string>();
  } else if (m.is_object()) {
    rejectUnknown(m, "model.", {"name", "kappa"});
    if (!m.contains("name")) throw ConfigError("model.name", "missing");
    c.model = text(m, "name", "model.");
    if (m.contains("kappa")) c.kappa = number(m, "kappa", "model.");
  } else {
    throw ConfigError("model", "expected a model name or {name, kappa}");
  }
  try {
    getModel(c.model, c.kappa);
  } catch (const UnknownModelError& e) {
    throw ConfigError("model.name", e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("model.kappa", e.what());
  }

  if (j.contains("space")) c.space = text(j, "space", "");
  if (c.space != "X" && c.space != "P") throw ConfigError("space", "expected X or P, got '" + c.space + "'");
  if (j.contains("branch")) {
    const auto b = text(j, "branch", "");
    if (b == "+" || b == "plus")
      c.branch = Branch::Plus;
    else if (b == "-" || b == "minus")
      c.branch = Branch::Minus;
    else
      throw ConfigError("branch", "expected + or -, got '" + b + "'");
  }
  if (!j.contains("profile")) throw ConfigError("profile", "missing");
  c.profile = profileFromJson(j.at("profile"));
  makeProfile(c.profile);
  if (c.space == "P" && c.profile.kind != "constant")
    throw ConfigError("profile.kind", "the P chart supports constant profiles only");

  if (j.contains("probes")) {
    const auto& v = j.at("probes");
    if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 100000)
      throw ConfigError("probes", "expected an integer in 1..100000");
    c.probes = v.get<int>();
  }
  if (j.contains("seed")) {
    const auto& v = j.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError("seed", "expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
    rejectUnknown(t, "tolerances.", {"residual", "torsion", "classify"});
    const auto positive = [&t](const char* key, double& out) {
      if (!t.contains(key)) return;
      out = number(t, key, "tolerances.");
      if (!(out > 0.0)) throw ConfigError(std::string("tolerances.") + key, "must be positive");
    };
    positive("residual", c.tol.residual);
    positive("torsion", c.tol.torsion);
    positive("classify", c.tol.classify);
  }
  if (j.contains("suites")) {
    const auto& s = j.at("suites");
    if (!s.is_array()) throw ConfigError("suites", "expected an array of suite ids");
    for (const auto& e : s) {
      if (!e.is_string()) throw ConfigError("suites", "expected an array of suite ids");
      const auto id = e.get<std::string>();
      const auto& cat = suiteCatalog();
      const auto it = std::find_if(cat.begin(), cat.end(), [&id](const SuiteInfo& i) { return i.id == id; });
      if (it == cat.end()) throw ConfigError("suites", "unknown suite '" + id + "'");
      if (it->space != "any" && it->space != c.space)
        throw ConfigError("suites", "suite '" + id + "' needs space " + it->space);
      c.suites.push_back(id);
    }
  }
  if (j.contains("report")) c.report = text(j, "report", "");
  return c;
}

// ---------------------------------------------------------------------------
// Suites

const std::vector<SuiteInfo>& suiteCatalog() {
  static const std::vector<SuiteInfo> catalog{
      {"frame-calculus", "any",
       "structure equations of the Levi-Civita connection and of the induced connection on 2-forms"},
      {"model-flags", "any", "curvature type of the model metrics (Einstein, self-dual, anti-self-dual, scalar-flat)"},
      {"metric-from-phi", "any", "metric of phi is lambda^2 on the fibre plus mu^2 on the base"},
      {"second-derivative", "any", "d(dphi) = 0 and d(dpsi) = 0 from order-2 jets"},
      {"canonical-forms-X", "X", "tautological forms on X: dr = 2 f a^t, d(eta a^t) = eta f^t, d beta = h rho a^t"},
      {"structure-system-X", "X", "closed structure equations for dphi and dpsi on X"},
      {"torsion-X-closed-vs-numeric", "X", "torsion-forms theorem on X"},
      {"einstein-tau3-X", "X", "tau3 vanishes on X exactly when the base is Einstein"},
      {"lemma-two-of-three", "X", "two of {lambda mu constant, tau1 = 0, tau2 = 0} imply the third"},
      {"radial-incompleteness", "X", "finite length of a fibre radius and the vertical geodesic equation"},
      {"identities-P", "P", "algebraic and differential identities of the canonical forms on P"},
      {"cocalibration-P", "P", "cocalibration theorem on P: dpsi = 0 and dphi != 0"},
      {"torsion-P-closed", "P", "tau0 proposition and tau3 formula on P"},
      {"corollaries-P", "P", "nearly parallel and pure W3 tunings on P"},
  };
  return catalog;
}

std::string listSuites() {
  std::ostringstream os;
  for (const auto& s : suiteCatalog()) os << s.id << " [" << s.space << "]: " << s.anchor << "\n";
  return os.str();
}

namespace {

const std::string& anchorOf(const std::string& suite) {
  for (const auto& s : suiteCatalog())
    if (s.id == suite) return s.anchor;
  throw std::logic_error("unknown suite " + suite);
}

class RecordSink {
 public:
  explicit RecordSink(std::vector<CheckRecord>& out) : out_(out) {}

  void upper(const std::string& suite, const std::string& id, double value, double tol, std::string note = {}) {
    add(suite, id, value, tol, "<=", std::isfinite(value) && value <= tol, std::move(note));
  }
  void lower(const std::string& suite, const std::string& id, double value, double tol, std::string note = {}) {
    add(suite, id, value, tol, ">=", std::isfinite(value) && value >= tol, std::move(note));
  }
  void skipped(const std::string& suite, const std::string& id, std::string note) {
    CheckRecord r;
    r.suite = suite;
    r.checkId = id;
    r.anchor = anchorOf(suite);
    r.relation = "n/a";
    r.applicable = false;
    r.pass = true;
    r.note = std::move(note);
    out_.push_back(r);
  }

 private:
  void add(const std::string& suite, const std::string& id, double value, double tol, const char* rel, bool pass,
           std::string note) {
    CheckRecord r;
    r.suite = suite;
    r.checkId = id;
    r.anchor = anchorOf(suite);
    r.value = value;
    r.tolerance = tol;
    r.relation = rel;
    r.pass = pass;
    r.note = std::move(note);
    out_.push_back(r);
  }
  std::vector<CheckRecord>& out_;
};

template <class T, class F>
double maxOver(const std::vector<T>& v, F f) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& e : v) m = std::max(m, static_cast<double>(f(e)));
  return m;
}

template <class T, class F>
double minOver(const std::vector<T>& v, F f) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : v) m = std::min(m, static_cast<double>(f(e)));
  return m;
}

std::array<double, 4> maxNorms(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return {std::max(a[0], b[0]), std::max(a[1], b[1]), std::max(a[2], b[2]), std::max(a[3], b[3])};
}

struct BaseSample {
  PointGeometry geometry;
  CurvatureFlags flags;
};

BaseSample baseSample(const ModelSpec& m, const Point<4>& x, double tol) {
  BaseSample b;
  b.geometry = analyzePoint(m.metric, x, m.orientation);
  b.flags = predicates(b.geometry.st, tol);
  return b;
}

void baseSuites(const RunConfig& cfg, const ModelSpec& model, const std::vector<BaseSample>& base,
                const std::set<std::string>& on, RecordSink& out) {
  if (on.count("frame-calculus")) {
    const std::string s = "frame-calculus";
    const double tol = cfg.tol.residual;
    out.upper(s, "cartan", maxOver(base, [](auto& b) { return b.geometry.cartanResidual; }), tol,
              "|d theta + theta omega|");
    out.upper(s, "omega-skew", maxOver(base, [](auto& b) { return b.geometry.omegaSkew; }), tol);
    out.upper(s, "induced-connection", maxOver(base, [](auto& b) { return b.geometry.dualityResidual; }), tol,
              "|d eta - eta omegaP| on both bundles");
    out.upper(s, "bianchi", maxOver(base, [](auto& b) { return b.geometry.bianchiResidual; }), tol,
              "|eta rhoP| on both bundles");
    out.upper(s, "symmetry-A", maxOver(base, [](auto& b) { return b.geometry.asymmetryA; }), tol);
    out.upper(s, "symmetry-C", maxOver(base, [](auto& b) { return b.geometry.asymmetryC; }), tol);
    out.upper(s, "trace-A-C", maxOver(base, [](auto& b) { return b.geometry.traceGap; }), tol,
              "|tr A - tr C| and |tr A - Scal/4|");
  }
  if (on.count("model-flags")) {
    const std::string s = "model-flags";
    const auto& e = model.expected;
    int mismatches = 0;
    for (const auto& b : base) {
      mismatches += (b.flags.einstein != e.einstein) + (b.flags.sd != e.sd) + (b.flags.asd != e.asd) +
                    (b.flags.scalarFlat != e.scalarFlat) + (b.flags.sSign != e.sSign);
    }
    out.upper(s, "flag-mismatches", mismatches, 0.0, "Einstein, SD, ASD, scalar-flat and sign of s at every probe");
    const double sMin = minOver(base, [](auto& b) { return b.geometry.st.s; });
    const double sMax = maxOver(base, [](auto& b) { return b.geometry.st.s; });
    if (e.sConstant) out.upper(s, "s-constant", sMax - sMin, cfg.tol.classify);
    if (std::isfinite(model.sValue)) {
      const double dev = std::max(std::abs(sMax - model.sValue), std::abs(sMin - model.sValue));
      std::ostringstream note;
      note << "expected s = " << model.sValue;
      out.upper(s, "s-value", dev, cfg.tol.classify, note.str());
    }
  }
}

// ---- X -------------------------------------------------------------------

struct XSample {
  double phiResidual, psiResidual, metricResidual, drResidual, tautResidual, betaResidual, sysPhi, sysPsi,
      consistency;
  std::array<double, 4> norms;
  bool hypothesis = false;
  std::string hypothesisNote;
  double tau0 = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

XSample xSample(const ChartX& chart, const Point<4>& x, const std::array<double, 3>& a, double tol) {
  const auto p = evaluateX(chart, x, a);
  const auto t = torsionXNumeric(p);
  XSample s;
  s.phiResidual = p.phiResidual;
  s.psiResidual = p.psiResidual;
  s.metricResidual = p.metricResidual;
  s.drResidual = p.drResidual;
  s.tautResidual = p.tautologicalResidual;
  s.betaResidual = p.betaResidual;
  s.sysPhi = p.systemResidualPhi;
  s.sysPsi = p.systemResidualPsi;
  s.consistency = std::max(t.residualPhi, t.residualPsi);
  s.norms = t.norms();
  s.tau0 = std::abs(t.tau0);
  try {
    const auto c = torsionXClosed(p, chart.profile, chart.branch, tol);
    s.hypothesis = true;
    s.d1 = maxAbs(t.tau1 - c.tau1);
    s.d2 = maxAbs(t.tau2 - c.tau2);
    s.d3 = maxAbs(t.tau3 - c.tau3);
  } catch (const DualityHypothesisError& e) {
    s.hypothesisNote = e.what();
  }
  return s;
}

void lemmaSuite(const RunConfig& cfg, Execution mode, RecordSink& out) {
  const std::string s = "lemma-two-of-three";
  std::mt19937_64 rng(cfg.seed ^ 0x5eed1e44aULL);
  std::uniform_real_distribution<double> S(-2.0, 2.0), C(0.5, 2.0);
  std::vector<std::array<double, 3>> params(20);
  for (auto& p : params) p = {S(rng), C(rng), C(rng)};
  const auto cases =
      parallelMap(static_cast<int>(params.size()), [&](int i) { return lemmaCheck(params[i][0], params[i][1], params[i][2], 100); }, mode);
  for (int k = 0; k < 3; ++k) {
    const auto& c0 = cases.front()[k];
    const double enforced = maxOver(cases, [k](auto& c) { return c[k].enforcedResidual; });
    const double measured = maxOver(cases, [k](auto& c) { return c[k].measuredResidual; });
    out.upper(s, "enforced: " + c0.enforced, enforced, cfg.tol.residual, "20 random (s, c0, c1), 100 radii each");
    out.upper(s, "implied: " + c0.measured, measured, cfg.tol.residual, "given " + c0.enforced);
  }
}

void radialSuite(const RunConfig& cfg, const Profile& configProfile, RecordSink& out) {
  const std::string s = "radial-incompleteness";
  const bool own = configProfile.kind == Profile::Kind::BryantSalamon && configProfile.s < 0.0;
  const Profile p = own ? configProfile : bsProfileOnDisk(-1.0, 1.0, 0.5);
  const double r0 = p.rMax();
  const auto q = radiusLength(p, 1e-8);
  const double oracle = radiusLengthMidpoint(p, 1000000);
  // lambda(t^2/2) = c0 c1^(-1/4) (1 - t^2/(2 r0))^(-1/4)
  const double closed = p.c0 * std::pow(p.c1, -0.25) * std::sqrt(2.0 * r0) * std::sqrt(M_PI) * std::tgamma(0.75) /
                        (2.0 * std::tgamma(1.25));
  std::ostringstream note;
  note << std::setprecision(12) << (own ? "configured " : "default ") << p.describe() << ", r0 = " << r0
       << ", length = " << q.value << ", evaluations = " << q.evaluations;
  out.upper(s, "length-converged", q.converged ? 0.0 : 1.0, 0.0, note.str());
  out.upper(s, "length-vs-midpoint-oracle", std::abs(q.value - oracle), 1e-6);
  out.upper(s, "length-vs-beta-function", std::abs(q.value - closed), 1e-6);

  const double a = std::sqrt(2.0 * r0);
  const auto eq = verticalGeodesic(r0, 0.3 * a, 0.0, 2.0, 400);
  out.upper(s, "geodesic-equilibrium", maxOver(eq.g, [&](double g) { return std::abs(g - 0.3 * a); }), 0.0,
            "g' = 0 stays constant");
  const double v0 = 0.5;
  const double tHit = M_PI * r0 / (2.0 * v0 * a);
  const auto tr = verticalGeodesic(r0, 0.0, v0, 0.5 * tHit, 4000);
  double drift = 0.0;
  for (std::size_t i = 0; i < tr.g.size(); ++i)
    drift = std::max(drift, std::abs(tr.dg[i] * std::sqrt(2.0 * r0 - tr.g[i] * tr.g[i]) - v0 * a));
  out.upper(s, "geodesic-first-integral", drift, cfg.tol.residual, "g' sqrt(2 r0 - g^2) is conserved");
  out.upper(s, "geodesic-inside", tr.stayedInside ? 0.0 : 1.0, 0.0);
}

// ---- P -------------------------------------------------------------------

struct PSample {
  double phiResidual, psiResidual, metricResidual, horizontal;
  std::map<std::string, double> identities;
  double dpsi, dphi, tau0Gap, proposition, tau3Gap, tau3Wedge, consistency;
  std::array<double, 4> norms;
  std::string rotation;
};

PSample pSample(const ChartP& chart, const Point<4>& x, const std::array<double, 3>& u) {
  const auto p = evaluateP(chart, x, u);
  const auto t = torsionPNumeric(p);
  const auto c = torsionPClosed(p.st, chart.lambda, chart.mu, chart.branch, p.rhoHat);
  PSample s;
  s.phiResidual = p.phiResidual;
  s.psiResidual = p.psiResidual;
  s.metricResidual = p.metricResidual;
  s.horizontal = p.horizontalResidual;
  s.identities = p.identities;
  s.dpsi = maxAbs(p.dpsi);
  s.dphi = maxAbs(p.dphi);
  s.tau0Gap = std::abs(t.tau0 - c.tau0);
  s.proposition = maxAbs((7.0 * t.tau0 * p.standard.m) * p.standard.orientation - wedge(p.dphi, p.phi));
  s.tau3Gap = maxAbs(t.tau3 - c.tau3);
  s.tau3Wedge = std::max(maxAbs(wedge(c.tau3, p.phi)), maxAbs(wedge(c.tau3, p.psi)));
  s.consistency = std::max(t.residualPhi, t.residualPsi);
  s.norms = t.norms();
  s.rotation = p.frameRotationKind;
  return s;
}

void corollarySuite(const RunConfig& cfg, Execution mode, RecordSink& out) {
  const std::string s = "corollaries-P";
  const int n = std::min(cfg.probes, 5);
  const auto us = fibreProbesP(n, cfg.seed + 7);

  {
    const double l = 0.8, m = std::sqrt(5.0) * l;  // mu^2 = 5 s lambda^2, s = 1
    const auto chart = buildChartP(getModel("sphere4"), Branch::Minus, l, m);
    const auto xs = probePoints(chart.model, n, cfg.seed + 8);
    const auto r = parallelMap(n, [&](int i) {
      const auto p = evaluateP(chart, xs[i], us[i]);
      const auto t = torsionPNumeric(p);
      return std::array<double, 3>{maxAbs(p.dphi + (6.0 / (5.0 * l)) * p.psi), std::abs(t.tau0 + 6.0 / (5.0 * l)),
                                   classify(t, cfg.tol.classify).nearlyParallelCandidate ? 0.0 : 1.0};
    }, mode);
    out.upper(s, "nearly-parallel: dphi = -6/(5 lambda) psi on P- over sphere4", maxOver(r, [](auto& v) { return v[0]; }),
              cfg.tol.residual, "mu^2 = 5 s lambda^2, lambda = 0.8");
    out.upper(s, "nearly-parallel: tau0 = -6/(5 lambda)", maxOver(r, [](auto& v) { return v[1]; }), cfg.tol.residual);
    out.upper(s, "nearly-parallel: pure W0 label", maxOver(r, [](auto& v) { return v[2]; }), 0.0);
  }
  for (auto branch : {Branch::Plus, Branch::Minus}) {
    const double l = 1.1, m = std::sqrt(2.0) * l;  // mu^2 = -2 s lambda^2, s = -1
    const auto chart = buildChartP(getModel("hyperbolic4"), branch, l, m);
    const auto xs = probePoints(chart.model, n, cfg.seed + 9);
    const auto r = parallelMap(n, [&](int i) {
      const auto p = evaluateP(chart, xs[i], us[i]);
      const auto t = torsionPNumeric(p);
      const auto beta = Multivector::basis(7, {0, 1, 2});
      const auto expected = (sign(branch) / (2.0 * l)) * (p.phi - (7.0 * l * l * l) * beta);
      const auto cls = classify(t, cfg.tol.classify);
      const bool pureW3 = cls.w3 && !cls.w0 && !cls.w1 && !cls.w2;
      return std::array<double, 3>{std::abs(t.tau0), maxAbs(t.tau3 - expected), pureW3 ? 0.0 : 1.0};
    }, mode);
    const std::string tag = std::string("W3 tuning on P") + toString(branch) + " over hyperbolic4: ";
    out.upper(s, tag + "tau0 = 0", maxOver(r, [](auto& v) { return v[0]; }), cfg.tol.residual, "mu^2 = 2 lambda^2");
    out.upper(s, tag + "tau3 = +-(phi - 7 lambda^3 beta)/(2 lambda)", maxOver(r, [](auto& v) { return v[1]; }),
              cfg.tol.residual);
    out.upper(s, tag + "pure W3 label", maxOver(r, [](auto& v) { return v[2]; }), 0.0);
  }
}

std::string probeDomain(double safeRadius, const std::string& fibre) {
  std::ostringstream os;
  os << std::setprecision(6) << "base |x| < " << safeRadius << "; " << fibre;
  return os.str();
}

}  // namespace

Report run(const RunConfig& cfg, Execution mode) {
  const auto model = getModel(cfg.model, cfg.kappa);
  std::set<std::string> on;
  for (const auto& s : suiteCatalog())
    if ((s.space == "any" || s.space == cfg.space) && (cfg.suites.empty() ||
                                                       std::count(cfg.suites.begin(), cfg.suites.end(), s.id)))
      on.insert(s.id);

  Report rep;
  rep.config = cfg;
  RecordSink out(rep.records);
  const int n = cfg.probes;
  const auto xs = probePoints(model, n, cfg.seed);

  json conv;
  conv["curvatureSign"] = curvatureSign();
  conv["curvatureBlocks"] = "A = -s <rho+^i, e+^j>/2, B = s <rho+^i, e-^j>/2, C = s <rho-^i, e-^j>/2 with s = curvatureSign";
  conv["connection"] = "d theta + theta omega = 0, rho = d omega + omega omega, d eta = eta omegaP";
  conv["orientation"] = model.orientation;
  conv["orientationFlipped"] = model.orientation != 1;
  conv["metricIdentitySign"] = metricFromPhi(standardPhi(1.0, 1.0, cfg.branch).phi).identitySign;
  conv["w2Eigenvalue"] = w2Eigenvalue(cfg.branch);

  const auto base = parallelMap(n, [&](int i) { return baseSample(model, xs[i], cfg.tol.classify); }, mode);
  baseSuites(cfg, model, base, on, out);

  if (cfg.space == "X") {
    const auto profile = makeProfile(cfg.profile);
    ChartX chart;
    try {
      chart = buildChartX(model, cfg.branch, profile);
    } catch (const ChartDomainError& e) {
      throw ConfigError("profile", e.what());
    }
    const auto as = fibreProbesX(profile, n, cfg.seed + 1);
    const auto smp = parallelMap(n, [&](int i) { return xSample(chart, xs[i], as[i], cfg.tol.classify); }, mode);
    const double tol = cfg.tol.residual;
    {
      const double rmax = profile.rMax();
      std::ostringstream fib;
      fib << std::setprecision(6) << "fibre |a| <= " << (std::isfinite(rmax) ? std::min(3.0, std::sqrt(0.9 * rmax)) : 3.0);
      rep.environment["probeDomain"] = probeDomain(model.safeRadius, fib.str());
    }
    if (on.count("metric-from-phi")) {
      const std::string s = "metric-from-phi";
      out.upper(s, "gram = diag(lambda^2 x3, mu^2 x4)", maxOver(smp, [](auto& v) { return v.metricResidual; }), 1e-10);
      out.upper(s, "phi standard in adapted basis", maxOver(smp, [](auto& v) { return v.phiResidual; }), tol);
      out.upper(s, "psi standard in adapted basis", maxOver(smp, [](auto& v) { return v.psiResidual; }), tol);
    }
    if (on.count("canonical-forms-X")) {
      const std::string s = "canonical-forms-X";
      out.upper(s, "dr = 2 f a^t", maxOver(smp, [](auto& v) { return v.drResidual; }), 1e-9);
      out.upper(s, "d(eta a^t) = eta f^t", maxOver(smp, [](auto& v) { return v.tautResidual; }), tol);
      out.upper(s, "d beta = h rho a^t", maxOver(smp, [](auto& v) { return v.betaResidual; }), tol);
    }
    if (on.count("structure-system-X")) {
      const std::string s = "structure-system-X";
      out.upper(s, "dphi", maxOver(smp, [](auto& v) { return v.sysPhi; }), tol);
      out.upper(s, "dpsi", maxOver(smp, [](auto& v) { return v.sysPsi; }), tol);
    }
    if (on.count("torsion-X-closed-vs-numeric")) {
      const std::string s = "torsion-X-closed-vs-numeric";
      out.upper(s, "decomposition-consistency", maxOver(smp, [](auto& v) { return v.consistency; }), tol,
                "(dphi, dpsi) reconstructed from tau0..tau3");
      out.upper(s, "tau0 = 0", maxOver(smp, [](auto& v) { return v.tau0; }), tol);
      const bool all = std::all_of(smp.begin(), smp.end(), [](auto& v) { return v.hypothesis; });
      if (all) {
        out.upper(s, "tau1 closed vs numeric", maxOver(smp, [](auto& v) { return v.d1; }), cfg.tol.torsion);
        out.upper(s, "tau2 closed vs numeric", maxOver(smp, [](auto& v) { return v.d2; }), cfg.tol.torsion);
        out.upper(s, "tau3 closed vs numeric", maxOver(smp, [](auto& v) { return v.d3; }), cfg.tol.torsion);
      } else {
        const auto it = std::find_if(smp.begin(), smp.end(), [](auto& v) { return !v.hypothesis; });
        out.skipped(s, "closed-form torsion", "duality assumption fails: " + it->hypothesisNote);
      }
    }
    if (on.count("einstein-tau3-X")) {
      const std::string s = "einstein-tau3-X";
      const double t3 = maxOver(smp, [](auto& v) { return v.norms[3]; });
      if (model.expected.einstein)
        out.upper(s, "|tau3| on an Einstein base", t3, tol);
      else
        out.lower(s, "|tau3| on a non-Einstein base", t3, 1e-3, "maximum over probes");
    }
    if (on.count("second-derivative")) {
      const int m = std::min(n, 3);
      const auto dd =
          parallelMap(m, [&](int i) { return secondDerivativeResidualX(chart, xs[i], as[i]); }, mode);
      out.upper("second-derivative", "d(dphi)", maxOver(dd, [](auto& v) { return v.first; }), tol);
      out.upper("second-derivative", "d(dpsi)", maxOver(dd, [](auto& v) { return v.second; }), tol);
    }
    if (on.count("lemma-two-of-three")) lemmaSuite(cfg, mode, out);
    if (on.count("radial-incompleteness")) radialSuite(cfg, profile, out);
    for (const auto& v : smp) rep.torsionMax = maxNorms(rep.torsionMax, v.norms);
  } else {
    ChartP chart;
    try {
      chart = buildChartP(model, cfg.branch, cfg.profile.lambda, cfg.profile.mu);
    } catch (const ChartDomainError& e) {
      throw ConfigError("profile", e.what());
    }
    const auto us = fibreProbesP(n, cfg.seed + 1);
    const auto smp = parallelMap(n, [&](int i) { return pSample(chart, xs[i], us[i]); }, mode);
    const double tol = cfg.tol.residual;
    {
      std::ostringstream fib;
      fib << std::setprecision(6) << "fibre |u| < " << 0.9 * kExpChartRadius;
      rep.environment["probeDomain"] = probeDomain(model.safeRadius, fib.str());
    }
    conv["frameRotation"] = smp.empty() ? "" : smp.front().rotation;
    if (on.count("metric-from-phi")) {
      const std::string s = "metric-from-phi";
      out.upper(s, "gram = diag(lambda^2 x3, mu^2 x4)", maxOver(smp, [](auto& v) { return v.metricResidual; }), 1e-10);
      out.upper(s, "phi standard in adapted basis", maxOver(smp, [](auto& v) { return v.phiResidual; }), tol);
      out.upper(s, "psi standard in adapted basis", maxOver(smp, [](auto& v) { return v.psiResidual; }), tol);
    }
    if (on.count("identities-P")) {
      const std::string s = "identities-P";
      for (const auto& [id, unused] : smp.front().identities) {
        (void)unused;
        out.upper(s, id, maxOver(smp, [&id](auto& v) { return v.identities.at(id); }), tol);
      }
      out.upper(s, "rhoHat horizontal", maxOver(smp, [](auto& v) { return v.horizontal; }), tol);
    }
    if (on.count("cocalibration-P")) {
      const std::string s = "cocalibration-P";
      out.upper(s, "|dpsi|", maxOver(smp, [](auto& v) { return v.dpsi; }), std::min(tol, 1e-9));
      out.lower(s, "|dphi| (not calibrated)", minOver(smp, [](auto& v) { return v.dphi; }), 1e-3, "minimum over probes");
    }
    if (on.count("torsion-P-closed")) {
      const std::string s = "torsion-P-closed";
      out.upper(s, "decomposition-consistency", maxOver(smp, [](auto& v) { return v.consistency; }), tol);
      out.upper(s, "tau0 = +-6/(7 lambda mu^2)(mu^2 + 2 s lambda^2)", maxOver(smp, [](auto& v) { return v.tau0Gap; }), tol);
      out.upper(s, "7 tau0 Vol = dphi ^ phi", maxOver(smp, [](auto& v) { return v.proposition; }), std::min(tol, 1e-9));
      out.upper(s, "tau3 closed vs numeric", maxOver(smp, [](auto& v) { return v.tau3Gap; }), tol);
      out.upper(s, "tau3 ^ phi = tau3 ^ psi = 0", maxOver(smp, [](auto& v) { return v.tau3Wedge; }), tol);
    }
    if (on.count("second-derivative")) {
      const int m = std::min(n, 3);
      const auto dd =
          parallelMap(m, [&](int i) { return secondDerivativeResidualP(chart, xs[i], us[i]); }, mode);
      out.upper("second-derivative", "d(dphi)", maxOver(dd, [](auto& v) { return v.first; }), tol);
      out.upper("second-derivative", "d(dpsi)", maxOver(dd, [](auto& v) { return v.second; }), tol);
    }
    if (on.count("corollaries-P")) corollarySuite(cfg, mode, out);
    for (const auto& v : smp) rep.torsionMax = maxNorms(rep.torsionMax, v.norms);
  }

  rep.environment["seed"] = cfg.seed;
  rep.environment["probes"] = cfg.probes;
  rep.environment["conventions"] = conv;
  rep.torsionLabel = classify(rep.torsionMax, cfg.tol.classify).label;
  rep.pass = std::all_of(rep.records.begin(), rep.records.end(), [](const CheckRecord& r) { return r.pass; });
  return rep;
}

json Report::toJson() const {
  json j;
  j["config"] = g2frames::toJson(config);
  j["environment"] = environment;
  json recs = json::array();
  for (const auto& r : records) {
    json e;
    e["suite"] = r.suite;
    e["checkId"] = r.checkId;
    e["anchor"] = r.anchor;
    e["maxResidual"] = r.value;
    e["tolerance"] = r.tolerance;
    e["relation"] = r.relation;
    e["applicable"] = r.applicable;
    e["pass"] = r.pass;
    if (!r.note.empty()) e["note"] = r.note;
    recs.push_back(e);
  }
  j["records"] = recs;
  j["torsion"] = {{"maxNorms", torsionMax}, {"label", torsionLabel}};
  j["pass"] = pass;
  return j;
}

std::string Report::format(bool quiet) const {
  std::ostringstream os;
  int failed = 0;
  for (const auto& r : records) {
    if (!r.pass) ++failed;
    if (quiet && r.pass) continue;
    os << (r.applicable ? (r.pass ? "PASS " : "FAIL ") : "SKIP ") << r.suite << " / " << r.checkId;
    if (r.applicable) os << std::scientific << std::setprecision(3) << "  " << r.value << " " << r.relation << " " << r.tolerance;
    os << "  [" << r.anchor << "]";
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << "\n";
  }
  os << std::defaultfloat;
  os << "torsion class: " << torsionLabel << "\n";
  os << (pass ? "ALL PASS" : "FAILED") << ": " << records.size() - failed << "/" << records.size() << " records pass\n";
  return os.str();
}

}  // namespace g2frames
