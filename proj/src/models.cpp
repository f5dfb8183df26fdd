#include "g2frames/models.hpp"

#include <random>

namespace g2frames {

namespace {

ExpectedFlags flagsFor(ModelId id) {
  switch (id) {
    case ModelId::Flat:
      return {true, true, true, true, 0, true};
    case ModelId::Sphere4:
      return {true, true, true, false, 1, true};
    case ModelId::Hyperbolic4:
      return {true, true, true, false, -1, true};
    case ModelId::FubiniStudy:
      return {true, true, false, false, 1, true};
    case ModelId::ComplexHyperbolic:
      return {true, true, false, false, -1, true};
    case ModelId::ProductS2H2:
      return {false, true, true, true, 0, true};  // conformally flat
  }
  return {};
}

}  // namespace

std::vector<std::string> modelNames() {
  return {"flat", "sphere4", "hyperbolic4", "fubiniStudy", "complexHyperbolic", "productS2H2"};
}

ModelSpec getModel(const std::string& name, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("model parameter kappa must be positive, got " + std::to_string(kappa));
  ModelSpec m;
  m.name = name;
  m.kappa = kappa;
  if (name == "flat") {
    m.id = ModelId::Flat;
    m.metric = MetricField([](const auto& x) { return metrics::flat(x); });
    m.safeRadius = 1.0;
    m.sValue = 0.0;
  } else if (name == "sphere4") {
    m.id = ModelId::Sphere4;
    m.metric = MetricField([kappa](const auto& x) { return metrics::sphere4(x, kappa); });
    m.safeRadius = 0.8 * kappa;
    m.sValue = 1.0 / (kappa * kappa);
  } else if (name == "hyperbolic4") {
    m.id = ModelId::Hyperbolic4;
    m.metric = MetricField([](const auto& x) { return metrics::hyperbolic4(x); });
    m.safeRadius = 0.7;
    m.sValue = -1.0;
  } else if (name == "fubiniStudy") {
    m.id = ModelId::FubiniStudy;
    m.metric = MetricField([](const auto& x) { return metrics::fubiniStudy(x); });
    m.safeRadius = 0.8;
    m.sValue = 1.0;
  } else if (name == "complexHyperbolic") {
    m.id = ModelId::ComplexHyperbolic;
    m.metric = MetricField([](const auto& x) { return metrics::complexHyperbolic(x); });
    m.safeRadius = 0.7;
    m.sValue = -1.0;
  } else if (name == "productS2H2") {
    m.id = ModelId::ProductS2H2;
    m.metric = MetricField([](const auto& x) { return metrics::productS2H2(x); });
    m.safeRadius = 0.7;
    m.sValue = 0.0;
  } else {
    throw UnknownModelError(name);
  }
  m.expected = flagsFor(m.id);
  return m;
}

std::vector<ExpectedRow> expectedTable() {
  std::vector<ExpectedRow> rows;
  for (const auto& n : modelNames()) rows.push_back({n, getModel(n).expected});
  return rows;
}

std::vector<Point<4>> probePoints(const ModelSpec& model, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point<4>> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Point<4> p{u(rng), u(rng), u(rng), u(rng)};
    double r2 = 0.0;
    for (double c : p) r2 += c * c;
    if (r2 >= 1.0) continue;
    for (double& c : p) c *= model.safeRadius;
    out.push_back(p);
  }
  return out;
}

}  // namespace g2frames
