#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mecsim/lifespan.hpp"
#include "mecsim/model.hpp"
#include "mecsim/policies.hpp"
#include "mecsim/trace.hpp"

namespace mecsim {

/// A policy broke the decision contract (illegal admit or block).
class PolicyViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RunOptions {
  double horizon = 0.0;
  std::optional<double> warm_up;  // defaults to 10% of the horizon
  std::uint64_t seed = 1;
  std::uint64_t replication = 0;
  LifespanFamily lifespan = LifespanFamily::kExponential;
  std::optional<ArrivalModel> arrivals;  // stationary config.arrival_rate when absent
  double timeline_bin = 0.0;             // bin width for timelines; 0 disables
  bool audit = false;                    // full capacity/load recomputation after every event
  bool record_trace = false;

  double effective_warm_up() const { return warm_up.value_or(0.1 * horizon); }
};

struct TraceEvent {
  enum class Kind { kArrival, kDeparture };
  double time = 0.0;
  Kind kind = Kind::kArrival;
  int cls = 0;
  std::optional<ResourceTuple> tuple;  // admitted or released tuple; empty for a block

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct TimelineBin {
  double start = 0.0;
  double end = 0.0;
  double energy = 0.0;              // total power integral inside the bin
  double operational_energy = 0.0;  // without static power
  long arrivals = 0;
  long blocks = 0;
  long completions = 0;
  double delay_sum = 0.0;

  friend bool operator==(const TimelineBin&, const TimelineBin&) = default;
};

/// Everything one replication measured. Windowed quantities cover
/// [warm_up, horizon]; the lifetime_* counters cover the whole run.
struct MetricsAccumulator {
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  double warm_up = 0.0;
  double horizon = 0.0;

  double energy = 0.0;  // integral of total power
  double static_energy = 0.0;
  double edge_energy = 0.0;   // operational, edge groups
  double cloud_energy = 0.0;  // cloud term

  long arrivals = 0;
  long admissions = 0;
  long blocks = 0;
  long completions = 0;
  double delay_sum = 0.0;
  std::vector<long> arrivals_per_class;
  std::vector<long> blocks_per_class;
  std::map<std::pair<int, ResourceTuple>, long> admitted_per_tuple;

  long lifetime_arrivals = 0;
  long lifetime_admissions = 0;
  long lifetime_blocks = 0;
  long lifetime_completions = 0;
  long in_flight = 0;
  std::uint64_t events = 0;

  long learner_increments = 0;
  long learner_decrements = 0;

  std::vector<TimelineBin> timeline;
  std::vector<TraceEvent> trace;

  double duration() const { return horizon - warm_up; }
  double average_power() const { return energy / duration(); }
  double operational_power() const { return (edge_energy + cloud_energy) / duration(); }
  double throughput() const { return completions / duration(); }
  /// Completions per unit time per operational watt.
  double throughput_per_watt() const;
  double average_delay() const;
  double blocking_rate() const;
  bool flow_conserved() const;

  friend bool operator==(const MetricsAccumulator&, const MetricsAccumulator&) = default;
};

/// Runs one seeded replication of `policy` on `config`. Throws
/// std::invalid_argument for bad options and PolicyViolation / std::logic_error
/// if the policy or the engine breaks a capacity or admission invariant.
MetricsAccumulator run_replication(const NetworkConfig& config, Policy& policy, const RunOptions& options);
MetricsAccumulator run_replication(const NetworkConfig& config, const PolicySpec& spec, const RunOptions& options);

}  // namespace mecsim
