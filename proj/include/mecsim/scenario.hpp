#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mecsim/lifespan.hpp"
#include "mecsim/model.hpp"
#include "mecsim/policies.hpp"

namespace mecsim {

inline constexpr int kScenarioSchemaVersion = 1;

struct ExperimentSpec {
  std::optional<double> rho;                       // uniform traffic intensity
  std::optional<std::vector<double>> rho_per_class;
  int scale = 1;  // h
  double horizon = 20000.0;
  std::optional<double> warm_up;  // 10% of the horizon when absent
  int replications = 20;
  std::uint64_t seed = 1;
  LifespanFamily lifespan = LifespanFamily::kExponential;
  double timeline_bin = 0.0;  // 0: horizon / 50

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

struct ScenarioSpec {
  int schema_version = kScenarioSchemaVersion;
  std::string name;
  NetworkConfig network;
  std::vector<PolicySpec> policies;
  ExperimentSpec experiment;
  std::optional<std::string> trace;
  std::string output_dir = "results";

  /// Network, policy and experiment invariants; throws ValidationError.
  void validate() const;

  friend bool operator==(const ScenarioSpec&, const ScenarioSpec&) = default;
};

/// JSON text of a scenario (indices are 1-based in the file).
std::string dump_scenario(const ScenarioSpec& spec);
/// Throws ParseError for malformed or incomplete documents. Does not validate.
ScenarioSpec parse_scenario(const std::string& text, const std::string& source = "scenario");

ScenarioSpec load_scenario(const std::string& path);
void save_scenario(const ScenarioSpec& spec, const std::string& path);

}  // namespace mecsim
