#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mecsim {

/// Per-class arrival intensities: a base rate, optionally modulated by a
/// piecewise-constant multiplier schedule. The last bucket extends forever.
struct ArrivalModel {
  std::vector<double> base_rate;                // lambda_j
  std::vector<double> bucket_start;             // empty for stationary arrivals
  std::vector<std::vector<double>> multiplier;  // [class][bucket]

  static ArrivalModel stationary(std::vector<double> rates);

  bool is_stationary() const { return bucket_start.empty(); }
  std::size_t bucket_at(double t) const;
  double rate(int cls, double t) const;
  /// Upper bound of rate(cls, .) over all time, used for thinning.
  double max_rate(int cls) const;
};

/// Parses rows `bucket_start_time,class_id,rate_multiplier` (class ids are
/// 1-based). Blank lines and `#` comments are skipped; a header row is
/// allowed. Buckets start at 0 and every class lists every bucket.
/// Throws ParseError with the offending line number.
ArrivalModel parse_trace(std::istream& in, const std::vector<double>& base_rate, const std::string& source = "trace");
ArrivalModel load_trace(const std::string& path, const std::vector<double>& base_rate);

}  // namespace mecsim
