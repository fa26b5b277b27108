#include "mecsim/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mecsim/model.hpp"

namespace mecsim {

ArrivalModel ArrivalModel::stationary(std::vector<double> rates) {
  ArrivalModel m;
  m.base_rate = std::move(rates);
  return m;
}

std::size_t ArrivalModel::bucket_at(double t) const {
  auto it = std::upper_bound(bucket_start.begin(), bucket_start.end(), t);
  return it == bucket_start.begin() ? 0 : static_cast<std::size_t>(it - bucket_start.begin()) - 1;
}

double ArrivalModel::rate(int cls, double t) const {
  if (is_stationary()) return base_rate[cls];
  return base_rate[cls] * multiplier[cls][bucket_at(t)];
}

double ArrivalModel::max_rate(int cls) const {
  if (is_stationary()) return base_rate[cls];
  return base_rate[cls] * *std::max_element(multiplier[cls].begin(), multiplier[cls].end());
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_int(const std::string& s, int& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

ArrivalModel parse_trace(std::istream& in, const std::vector<double>& base_rate, const std::string& source) {
  const int J = static_cast<int>(base_rate.size());
  std::map<double, std::map<int, double>> rows;  // bucket start -> class -> multiplier
  std::map<double, int> first_line;
  std::string line;
  int line_no = 0;
  bool seen_data = false;
  auto fail = [&](const std::string& what) {
    throw ParseError(source + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 3) fail("expected 3 comma-separated fields, got " + std::to_string(fields.size()));

    double start = 0.0;
    int cls = 0;
    double mult = 0.0;
    const bool numeric = parse_double(fields[0], start);
    if (!numeric && !seen_data && fields[0] == "bucket_start_time") {
      seen_data = true;  // header row
      continue;
    }
    seen_data = true;
    if (!numeric || !std::isfinite(start)) fail("malformed bucket_start_time '" + fields[0] + "'");
    if (start < 0.0) fail("bucket_start_time must be non-negative");
    if (!parse_int(fields[1], cls)) fail("malformed class_id '" + fields[1] + "'");
    if (cls < 1 || cls > J) fail("class_id " + fields[1] + " outside [1, " + std::to_string(J) + "]");
    if (!parse_double(fields[2], mult) || !std::isfinite(mult)) fail("malformed rate_multiplier '" + fields[2] + "'");
    if (mult < 0.0) fail("negative rate_multiplier " + fields[2]);

    auto& bucket = rows[start];
    if (!bucket.emplace(cls - 1, mult).second)
      fail("duplicate row for class " + std::to_string(cls) + " at bucket " + fields[0]);
    first_line.emplace(start, line_no);
  }

  if (rows.empty()) {
    line_no = std::max(line_no, 1);
    fail("trace contains no buckets");
  }
  if (rows.begin()->first != 0.0) {
    line_no = first_line[rows.begin()->first];
    fail("gap: first bucket must start at time 0");
  }

  ArrivalModel model;
  model.base_rate = base_rate;
  model.multiplier.assign(J, {});
  for (const auto& [start, per_class] : rows) {
    if (static_cast<int>(per_class.size()) != J) {
      line_no = first_line[start];
      for (int j = 0; j < J; ++j)
        if (!per_class.count(j))
          fail("gap: class " + std::to_string(j + 1) + " has no row for the bucket starting at " +
               std::to_string(start));
    }
    model.bucket_start.push_back(start);
    for (int j = 0; j < J; ++j) model.multiplier[j].push_back(per_class.at(j));
  }
  return model;
}

ArrivalModel load_trace(const std::string& path, const std::vector<double>& base_rate) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open trace file");
  return parse_trace(in, base_rate, path);
}

}  // namespace mecsim
