#pragma once
// Configuration-driven verification runs: a RunConfig selects a model, a
// branch, a chart (X or P) and a profile; run() evaluates the selected suites
// at seeded probe points and collects one record per check.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "g2frames/g2point.hpp"
#include "g2frames/parallel.hpp"
#include "g2frames/profile.hpp"

namespace g2frames {

/// Invalid configuration; key() names the offending entry (dotted path).
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::invalid_argument(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ProfileSpec {
  std::string kind = "constant";  // bs | constant | tau2zero | table
  double s = 1.0, c0 = 1.0, c1 = 1.0;
  std::optional<double> r0;  // bs on a disk: replaces c1
  double lambda = 1.0, mu = 1.0;
  std::vector<double> r, lambdaTable, muTable;
  bool operator==(const ProfileSpec&) const = default;
};

Profile makeProfile(const ProfileSpec& spec);

struct Tolerances {
  double residual = 1e-8;  // identities and structure equations
  double torsion = 1e-6;   // closed-form against numeric torsion
  double classify = 1e-7;  // curvature flags and torsion class membership
  bool operator==(const Tolerances&) const = default;
};

struct RunConfig {
  std::string model = "sphere4";
  double kappa = 1.0;
  std::string space = "X";  // X | P
  Branch branch = Branch::Minus;
  ProfileSpec profile;
  int probes = 20;
  std::uint64_t seed = 1;
  Tolerances tol;
  std::vector<std::string> suites;  // empty: every suite of the space
  std::string report;               // output path, empty for none
  bool operator==(const RunConfig&) const = default;
};

nlohmann::json toJson(const RunConfig& c);
RunConfig configFromJson(const nlohmann::json& j);

struct CheckRecord {
  std::string suite;
  std::string checkId;
  std::string anchor;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";  // value <= tolerance, or value >= tolerance for witnesses
  bool applicable = true;
  bool pass = false;
  std::string note;
};

struct Report {
  RunConfig config;
  nlohmann::json environment;
  std::vector<CheckRecord> records;
  std::array<double, 4> torsionMax{};
  std::string torsionLabel;
  bool pass = false;

  nlohmann::json toJson() const;
  /// One human-readable line per record.
  std::string format(bool quiet) const;
};

struct SuiteInfo {
  std::string id;
  std::string space;  // X, P or any
  std::string anchor;
};

const std::vector<SuiteInfo>& suiteCatalog();
std::string listSuites();

Report run(const RunConfig& config, Execution mode = Execution::Parallel);

}  // namespace g2frames
