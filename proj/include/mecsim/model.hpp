#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mecsim {

/// Raised when a configuration breaks one of its structural invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed input files (scenarios, traces).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A channel-SC reservation for one task: starting channel, ending channel and
/// SC group. All indices are zero-based; `group == num_sc_groups` is the cloud.
struct ResourceTuple {
  int start = 0;
  int end = 0;
  int group = 0;

  // Deterministic total order: group first, then start, then end channel.
  friend auto operator<=>(const ResourceTuple& a, const ResourceTuple& b) {
    if (auto c = a.group <=> b.group; c != 0) return c;
    if (auto c = a.start <=> b.start; c != 0) return c;
    return a.end <=> b.end;
  }
  friend bool operator==(const ResourceTuple&, const ResourceTuple&) = default;
};

std::string to_string(const ResourceTuple& t);

struct EligibleTuple {
  ResourceTuple tuple;
  double rate = 0.0;  // u_j(i,i',k) > 0

  friend bool operator==(const EligibleTuple&, const EligibleTuple&) = default;
};

/// Static description of the MEC system. Plain aggregate; call validate()
/// after filling it in. Shared read-only between replications.
struct NetworkConfig {
  int num_sc_groups = 0;
  int num_channels = 0;
  int num_classes = 0;
  int num_areas = 1;

  std::vector<int> sc_capacity;       // C_k, size K
  std::vector<int> channel_capacity;  // N_i, size I

  // w_{j,k}; std::nullopt marks a forbidden (class, group) pair. [J][K]
  std::vector<std::vector<std::optional<int>>> occupancy;
  // Nominal cloud requirement per class, only read by the revenue-rate baseline.
  std::vector<int> cloud_occupancy;

  std::vector<double> arrival_rate;            // lambda_j
  std::vector<double> edge_operational_power;  // eps_k, W per SC unit
  std::vector<double> edge_static_power;       // eps^0_k, W per group
  std::vector<double> cloud_energy_rate;       // bar eps_j
  double cloud_backhaul_delay = 0.0;           // D_0
  std::vector<int> area_map;                   // group -> area (zero-based)

  // Eligible tuples per class, kept sorted by ResourceTuple order.
  std::vector<std::vector<EligibleTuple>> eligible;

  int cloud() const { return num_sc_groups; }
  bool is_cloud(int group) const { return group == num_sc_groups; }

  /// Registers u_j(tuple) = rate. A zero rate removes the tuple.
  void set_service_rate(int cls, const ResourceTuple& t, double rate);
  /// u_j(tuple), 0 when the tuple is not eligible for the class.
  double service_rate(int cls, const ResourceTuple& t) const;

  /// Occupancy of a class on an edge group; throws for forbidden pairs.
  int requirement(int cls, int group) const;
  bool forbidden(int cls, int group) const { return !occupancy[cls][group].has_value(); }

  double total_static_power() const;
  int max_sc_capacity() const;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Per-channel radio parameters used to derive an achievable rate.
struct ChannelPhysics {
  double bandwidth = 1.0;       // Hz
  double transmit_power = 1.0;  // W
  double channel_gain = 1.0;
  double noise_power = 1.0;  // W
  static constexpr double kSnrThreshold = 100.0;  // 20 dB
};

/// Achievable rate B log2(1 + p h / N0), or exactly 0 below the 20 dB threshold.
double transmission_rate(const ChannelPhysics& phys);

/// Expected duration 1/mu + D0 of a task processed in the cloud.
double cloud_duration(double mu, const NetworkConfig& config);

enum Violation : unsigned {
  kNoViolation = 0,
  kScViolation = 1u << 0,
  kStartChannelViolation = 1u << 1,
  kEndChannelViolation = 1u << 2,
};

/// Occupancy counts X_{i,i',j,k} plus incrementally maintained loads.
class SystemState {
 public:
  explicit SystemState(const NetworkConfig& config);

  int occupancy(int cls, const ResourceTuple& t) const { return counts_[slot(cls, t)]; }
  int sc_load(int group) const { return sc_load_[group]; }
  int channel_load(int channel) const { return channel_load_[channel]; }
  std::int64_t total_tasks() const { return total_; }

  /// Adds one task. Throws std::logic_error if capacity would be exceeded.
  void admit(int cls, const ResourceTuple& t);
  /// Removes one task. Throws std::logic_error if no such task exists.
  void release(int cls, const ResourceTuple& t);

  /// Recomputes every load from the raw counts and compares.
  bool loads_consistent() const;
  /// Checks Constraints on SC and channel capacity over all resources.
  bool within_capacity() const;

  const NetworkConfig& config() const { return *config_; }

  double clock = 0.0;

 private:
  std::size_t slot(int cls, const ResourceTuple& t) const;

  const NetworkConfig* config_;
  std::vector<int> counts_;
  std::vector<int> sc_load_;
  std::vector<int> channel_load_;
  std::int64_t total_ = 0;
};

/// Sub-channel slots a tuple takes on `channel` (2 on a same-channel handover).
int channel_footprint(const ResourceTuple& t, int channel);

/// Bitmask of the capacity tests a new class-`cls` task on `t` would fail.
unsigned check_tuple(const SystemState& state, int cls, const ResourceTuple& t);

inline bool tuple_available(const SystemState& state, int cls, const ResourceTuple& t) {
  return check_tuple(state, cls, t) == kNoViolation;
}

/// The set of tuples that can take a new class-`cls` task right now.
std::vector<ResourceTuple> available_tuples(const SystemState& state, int cls);

/// Power drawn by one class-`cls` task on `t`: eps_k w_{j,k} at the edge,
/// bar eps_j u_j in the cloud.
double task_power(const NetworkConfig& config, int cls, const ResourceTuple& t);

/// Operational plus static power of the current state, computed from scratch.
double instantaneous_power(const SystemState& state);

}  // namespace mecsim
