#include "mecsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

namespace mecsim {

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return s;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  const double n = static_cast<double>(values.size());
  const double sd = std::sqrt(ss / (n - 1.0));
  boost::math::students_t dist(n - 1.0);
  s.half_width = boost::math::quantile(dist, 0.975) * sd / std::sqrt(n);
  return s;
}

double power_conservation(double baseline_power, double policy_power) {
  return (baseline_power - policy_power) / baseline_power;
}

double relative_gain(double baseline_value, double policy_value) {
  return (policy_value - baseline_value) / baseline_value;
}

const PolicyReport& ExperimentReport::at(const std::string& name) const {
  for (const auto& p : policies)
    if (p.spec.name == name) return p;
  throw std::out_of_range("no report for policy '" + name + "'");
}

namespace {

template <typename F>
MetricSummary over_runs(const std::vector<MetricsAccumulator>& runs, F f) {
  std::vector<double> v;
  v.reserve(runs.size());
  for (const auto& r : runs) v.push_back(f(r));
  return summarize(v);
}

}  // namespace

ExperimentReport run_experiment(const NetworkConfig& config, const std::vector<PolicySpec>& policies,
                                const ExperimentOptions& options) {
  if (options.replications < 2) throw std::invalid_argument("run_experiment: at least 2 replications required");
  if (policies.empty()) throw std::invalid_argument("run_experiment: empty policy list");
  std::optional<std::size_t> base;
  if (options.relative) {
    for (std::size_t p = 0; p < policies.size(); ++p)
      if (policies[p].name == options.baseline) base = p;
    if (!base)
      throw std::invalid_argument("run_experiment: relative metrics need baseline policy '" + options.baseline +
                                  "' in the policy list");
  }
  for (const auto& spec : policies) validate_policy_spec(spec, config);

  const std::size_t R = static_cast<std::size_t>(options.replications);
  ExperimentReport report;
  report.policies.resize(policies.size());
  for (std::size_t p = 0; p < policies.size(); ++p) {
    report.policies[p].spec = policies[p];
    report.policies[p].runs.resize(R);
  }

  const std::size_t jobs = policies.size() * R;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t n = next++; n < jobs; n = next++) {
      const std::size_t p = n / R;
      const std::size_t r = n % R;
      try {
        RunOptions ro = options.run;
        ro.replication = r;
        report.policies[p].runs[r] = run_replication(config, policies[p], ro);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  for (auto& pr : report.policies) {
    pr.average_power = over_runs(pr.runs, [](const auto& m) { return m.average_power(); });
    pr.operational_power = over_runs(pr.runs, [](const auto& m) { return m.operational_power(); });
    pr.throughput = over_runs(pr.runs, [](const auto& m) { return m.throughput(); });
    pr.throughput_per_watt = over_runs(pr.runs, [](const auto& m) { return m.throughput_per_watt(); });
    pr.average_delay = over_runs(pr.runs, [](const auto& m) { return m.average_delay(); });
    pr.blocking_rate = over_runs(pr.runs, [](const auto& m) { return m.blocking_rate(); });
  }

  if (base) {
    report.baseline = options.baseline;
    const PolicyReport& b = report.policies[*base];
    for (auto& pr : report.policies) {
      std::vector<double> cons;
      std::vector<double> gain;
      for (std::size_t r = 0; r < R; ++r) {
        cons.push_back(power_conservation(b.runs[r].operational_power(), pr.runs[r].operational_power()));
        gain.push_back(relative_gain(b.runs[r].throughput_per_watt(), pr.runs[r].throughput_per_watt()));
      }
      MetricSummary c = summarize(cons);
      c.mean = power_conservation(b.operational_power.mean, pr.operational_power.mean);
      MetricSummary g = summarize(gain);
      g.mean = relative_gain(b.throughput_per_watt.mean, pr.throughput_per_watt.mean);
      pr.conservation = c;
      pr.throughput_per_watt_gain = g;
    }
  }
  return report;
}

}  // namespace mecsim
