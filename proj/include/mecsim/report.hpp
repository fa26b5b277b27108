#pragma once

#include <iosfwd>
#include <string>

#include "mecsim/experiment.hpp"

namespace mecsim {

inline constexpr const char* kResultsSchema = "mecsim-results/1";

/// Long format: one row per policy x metric x replication, then one
/// aggregate row (replication = "mean") per policy x metric.
/// Columns: schema,policy,metric,replication,value,half_width
void write_results_csv(std::ostream& out, const ExperimentReport& report);

/// Wide format, one row per policy. Columns: schema,policy, then value and
/// half-width pairs for every metric, conservation and throughput-per-watt gain.
void write_comparison_csv(std::ostream& out, const ExperimentReport& report);

/// Per policy and time bin, replication means. Columns:
/// schema,policy,bin_start,bin_end,average_power,throughput_per_watt,average_delay,blocking_rate
void write_timeline_csv(std::ostream& out, const ExperimentReport& report);

/// Aligned plain-text summary for the terminal.
void print_summary(std::ostream& out, const ExperimentReport& report);

}  // namespace mecsim
