#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mecsim/bandit.hpp"
#include "mecsim/model.hpp"

namespace mecsim {

/// Admit on a tuple, or block the arrival.
struct PolicyDecision {
  std::optional<ResourceTuple> tuple;

  static PolicyDecision admit(const ResourceTuple& t) { return {t}; }
  static PolicyDecision block() { return {}; }
  bool admitted() const { return tuple.has_value(); }
  friend bool operator==(const PolicyDecision&, const PolicyDecision&) = default;
};

PolicyDecision hee_acc_decide(int cls, const SystemState& state, const CapacityCoefficients& coeffs,
                              const NetworkConfig& config);
PolicyDecision hee_acc_zero_decide(int cls, const SystemState& state, const NetworkConfig& config);

/// Walk of an already built index table (the cached path of HEE-ACC).
PolicyDecision first_available(const IndexTable& table, const SystemState& state);

struct LearnerParams {
  double delta_gamma = 2.0;       // decrement step on gamma
  double delta_eta = 2.0;         // decrement step on eta
  double delta_gamma_plus = 2.0;  // increment step on gamma
  double delta_eta_plus = 2.0;    // increment step on eta
  int threshold = 100;            // M-bar
  // Relaxed solution at which the increment sub-gradients are evaluated.
  RelaxedConstraints subgradient_constraints = RelaxedConstraints::kActionOnly;

  friend bool operator==(const LearnerParams&, const LearnerParams&) = default;
};

/// Mutable state of the learning policy: coefficients, violation counters
/// M (K edge groups followed by I channels) and the hyper-parameters.
struct LearnerState {
  CapacityCoefficients coefficients;
  std::vector<int> violations;
  LearnerParams params;
  std::optional<DualPoint> last_dual;  // relaxed solution behind the latest increment
  long increments = 0;
  long decrements = 0;

  LearnerState() = default;
  LearnerState(const NetworkConfig& config, CapacityCoefficients initial, LearnerParams p);
};

/// One arrival under the learning policy; updates `learner` in place.
PolicyDecision hee_alrn_decide(int cls, const SystemState& state, LearnerState& learner, const NetworkConfig& config,
                               IndexTable* cache = nullptr);

/// Revenue rate per unit requirement used by the MRR baseline.
double mrr_value(const NetworkConfig& config, int cls, const ResourceTuple& t);
PolicyDecision mrr_decide(int cls, const SystemState& state, const NetworkConfig& config);

/// Remaining-capacity product used by the NRM-VNE baseline. `cloud_factor`
/// stands in for the unbounded cloud SC headroom.
double nrm_value(const SystemState& state, const ResourceTuple& t, double cloud_factor);
PolicyDecision nrm_vne_decide(int cls, const SystemState& state, const NetworkConfig& config,
                              std::optional<double> cloud_factor = std::nullopt);

/// Policy name plus its parameter block, as read from a scenario file.
struct PolicySpec {
  std::string name;  // hee-acc, hee-acc-zero, hee-alrn, mrr, nrm-vne
  std::vector<double> initial_gamma;
  std::vector<double> initial_eta;
  LearnerParams learner;
  std::optional<double> nrm_cloud_factor;

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

const std::vector<std::string>& known_policies();
void validate_policy_spec(const PolicySpec& spec, const NetworkConfig& config);

/// Decision interface used by the simulation engine. One instance per run.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual PolicyDecision decide(int cls, const SystemState& state) = 0;
  virtual std::string_view name() const = 0;
  /// Learner state of an adaptive policy, nullptr for the static ones.
  virtual const LearnerState* learner() const { return nullptr; }
};

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const NetworkConfig& config);

}  // namespace mecsim
