#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mecsim/engine.hpp"

namespace mecsim {

struct ExperimentOptions {
  RunOptions run;  // seed is the base seed; replication r uses stream index r
  int replications = 2;
  unsigned threads = 0;  // 0 picks hardware concurrency
  bool relative = true;  // compute metrics relative to `baseline`
  std::string baseline = "nrm-vne";
};

struct MetricSummary {
  double mean = 0.0;
  double half_width = 0.0;  // Student-t 95%
};

/// Mean and 95% Student-t half-width of a sample of replication values.
MetricSummary summarize(const std::vector<double>& values);

/// Relative power conservation (E_base - E_policy) / E_base.
double power_conservation(double baseline_power, double policy_power);
/// Relative gain in throughput per watt over the baseline.
double relative_gain(double baseline_value, double policy_value);

struct PolicyReport {
  PolicySpec spec;
  std::vector<MetricsAccumulator> runs;
  MetricSummary average_power;
  MetricSummary operational_power;
  MetricSummary throughput;
  MetricSummary throughput_per_watt;
  MetricSummary average_delay;
  MetricSummary blocking_rate;
  // Point estimates from replication means; half-widths from paired
  // per-replication ratios (replications share random numbers).
  std::optional<MetricSummary> conservation;
  std::optional<MetricSummary> throughput_per_watt_gain;
};

struct ExperimentReport {
  std::vector<PolicyReport> policies;
  std::optional<std::string> baseline;

  const PolicyReport& at(const std::string& name) const;
};

/// Runs every policy for the same seeded replications. Throws
/// std::invalid_argument when replications < 2, or when relative metrics are
/// requested and the baseline is missing from `policies`.
ExperimentReport run_experiment(const NetworkConfig& config, const std::vector<PolicySpec>& policies,
                                const ExperimentOptions& options);

}  // namespace mecsim
