#include "mecsim/report.hpp"

#include <cstdio>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

namespace mecsim {

namespace {

struct MetricColumn {
  const char* name;
  std::function<double(const MetricsAccumulator&)> per_run;
  std::function<MetricSummary(const PolicyReport&)> summary;
};

const std::vector<MetricColumn>& metric_columns() {
  static const std::vector<MetricColumn> cols{
      {"average_power", [](const auto& m) { return m.average_power(); }, [](const auto& p) { return p.average_power; }},
      {"operational_power", [](const auto& m) { return m.operational_power(); },
       [](const auto& p) { return p.operational_power; }},
      {"throughput", [](const auto& m) { return m.throughput(); }, [](const auto& p) { return p.throughput; }},
      {"throughput_per_watt", [](const auto& m) { return m.throughput_per_watt(); },
       [](const auto& p) { return p.throughput_per_watt; }},
      {"average_delay", [](const auto& m) { return m.average_delay(); }, [](const auto& p) { return p.average_delay; }},
      {"blocking_rate", [](const auto& m) { return m.blocking_rate(); }, [](const auto& p) { return p.blocking_rate; }},
  };
  return cols;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_results_csv(std::ostream& out, const ExperimentReport& report) {
  out << "schema,policy,metric,replication,value,half_width\n";
  const PolicyReport* base = report.baseline ? &report.at(*report.baseline) : nullptr;
  for (const auto& p : report.policies) {
    for (const auto& col : metric_columns())
      for (std::size_t r = 0; r < p.runs.size(); ++r)
        out << kResultsSchema << ',' << p.spec.name << ',' << col.name << ',' << r << ','
            << num(col.per_run(p.runs[r])) << ",\n";
    if (base) {
      for (std::size_t r = 0; r < p.runs.size(); ++r)
        out << kResultsSchema << ',' << p.spec.name << ",conservation," << r << ','
            << num(power_conservation(base->runs[r].operational_power(), p.runs[r].operational_power())) << ",\n";
    }
    if (p.spec.name == "hee-alrn") {
      for (std::size_t r = 0; r < p.runs.size(); ++r) {
        out << kResultsSchema << ',' << p.spec.name << ",learner_increments," << r << ','
            << p.runs[r].learner_increments << ",\n";
        out << kResultsSchema << ',' << p.spec.name << ",learner_decrements," << r << ','
            << p.runs[r].learner_decrements << ",\n";
      }
    }
  }
  for (const auto& p : report.policies) {
    for (const auto& col : metric_columns()) {
      const MetricSummary s = col.summary(p);
      out << kResultsSchema << ',' << p.spec.name << ',' << col.name << ",mean," << num(s.mean) << ','
          << num(s.half_width) << '\n';
    }
    if (p.conservation)
      out << kResultsSchema << ',' << p.spec.name << ",conservation,mean," << num(p.conservation->mean) << ','
          << num(p.conservation->half_width) << '\n';
    if (p.throughput_per_watt_gain)
      out << kResultsSchema << ',' << p.spec.name << ",throughput_per_watt_gain,mean,"
          << num(p.throughput_per_watt_gain->mean) << ',' << num(p.throughput_per_watt_gain->half_width) << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const ExperimentReport& report) {
  out << "schema,policy";
  for (const auto& col : metric_columns()) out << ',' << col.name << ',' << col.name << "_hw";
  out << ",conservation,conservation_hw,throughput_per_watt_gain,throughput_per_watt_gain_hw\n";
  for (const auto& p : report.policies) {
    out << kResultsSchema << ',' << p.spec.name;
    for (const auto& col : metric_columns()) {
      const MetricSummary s = col.summary(p);
      out << ',' << num(s.mean) << ',' << num(s.half_width);
    }
    for (const auto& s : {p.conservation, p.throughput_per_watt_gain}) {
      if (s) {
        out << ',' << num(s->mean) << ',' << num(s->half_width);
      } else {
        out << ",,";
      }
    }
    out << '\n';
  }
}

void write_timeline_csv(std::ostream& out, const ExperimentReport& report) {
  out << "schema,policy,bin_start,bin_end,average_power,throughput_per_watt,average_delay,blocking_rate\n";
  for (const auto& p : report.policies) {
    if (p.runs.empty()) continue;
    const std::size_t bins = p.runs.front().timeline.size();
    for (std::size_t b = 0; b < bins; ++b) {
      double power = 0.0;
      double tpw = 0.0;
      double delay = 0.0;
      double blocking = 0.0;
      const TimelineBin& ref = p.runs.front().timeline[b];
      for (const auto& run : p.runs) {
        const TimelineBin& bin = run.timeline[b];
        const double width = bin.end - bin.start;
        const double op = bin.operational_energy / width;
        power += bin.energy / width;
        tpw += op > 0.0 ? (bin.completions / width) / op : 0.0;
        delay += bin.completions > 0 ? bin.delay_sum / bin.completions : 0.0;
        blocking += bin.arrivals > 0 ? static_cast<double>(bin.blocks) / bin.arrivals : 0.0;
      }
      const double n = static_cast<double>(p.runs.size());
      out << kResultsSchema << ',' << p.spec.name << ',' << num(ref.start) << ',' << num(ref.end) << ','
          << num(power / n) << ',' << num(tpw / n) << ',' << num(delay / n) << ',' << num(blocking / n) << '\n';
    }
  }
}

void print_summary(std::ostream& out, const ExperimentReport& report) {
  const auto flags = out.flags();
  out << std::left << std::setw(14) << "policy" << std::right << std::setw(20) << "power (W)" << std::setw(20)
      << "throughput" << std::setw(14) << "blocking" << std::setw(14) << "delay";
  if (report.baseline) out << std::setw(22) << "conservation";
  out << '\n' << std::fixed;
  for (const auto& p : report.policies) {
    auto cell = [&](const MetricSummary& s, int width, int prec) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(prec) << s.mean << " +/- " << s.half_width;
      out << std::setw(width) << os.str();
    };
    out << std::left << std::setw(14) << p.spec.name << std::right;
    cell(p.average_power, 20, 2);
    cell(p.throughput, 20, 3);
    out << std::setw(14) << std::setprecision(4) << p.blocking_rate.mean;
    out << std::setw(14) << std::setprecision(4) << p.average_delay.mean;
    if (p.conservation) cell(*p.conservation, 22, 4);
    out << '\n';
  }
  out.flags(flags);
}

}  // namespace mecsim
