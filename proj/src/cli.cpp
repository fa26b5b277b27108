#include "mecsim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "mecsim/appendix.hpp"
#include "mecsim/experiment.hpp"
#include "mecsim/report.hpp"
#include "mecsim/scenario.hpp"
#include "mecsim/trace.hpp"

namespace mecsim {

namespace {

struct Flags {
  std::string scenario;
  std::vector<std::string> policies;
  std::optional<double> rho;
  std::vector<double> rho_per_class;
  std::optional<int> scale;
  std::optional<double> horizon;
  std::optional<double> warmup;
  std::optional<int> reps;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> lifespan;
  std::optional<std::string> trace;
  std::optional<std::string> out;
  std::optional<double> timeline_bin;
  unsigned threads = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void add_scenario_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--scenario", f.scenario, "Scenario file (JSON)");
  auto* rho = cmd->add_option("--rho", f.rho, "Uniform traffic intensity for the generated reference scenario");
  auto* per = cmd->add_option("--rho-per-class", f.rho_per_class, "Per-class intensities, comma separated")
                  ->delimiter(',');
  rho->excludes(per);
  cmd->add_option("--scale", f.scale, "Scaling parameter h (>= 1)");
}

void add_experiment_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--horizon", f.horizon, "Simulated time per replication (s)");
  cmd->add_option("--warmup", f.warmup, "Warm-up excluded from metrics (s); default 10% of horizon");
  cmd->add_option("--reps", f.reps, "Replications per policy");
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--lifespan", f.lifespan, "Lifespan family")
      ->check(CLI::IsMember({"exp", "det", "pareto-f", "pareto-inf"}));
  cmd->add_option("--trace", f.trace, "Arrival-rate trace (bucket_start_time,class_id,rate_multiplier)");
  cmd->add_option("--timeline-bin", f.timeline_bin, "Timeline bin width (s); default horizon/50");
  cmd->add_option("--threads", f.threads, "Worker threads; 0 uses all cores");
}

// Scenario from --scenario, or the reference system generated from
// --scale / --rho / --rho-per-class; then experiment overrides.
ScenarioSpec resolve_scenario(const Flags& f) {
  ScenarioSpec s;
  if (!f.scenario.empty()) {
    if (f.rho || !f.rho_per_class.empty() || f.scale)
      throw UsageError("--rho, --rho-per-class and --scale apply to the generated scenario; "
                       "they cannot be combined with --scenario");
    s = load_scenario(f.scenario);
  } else {
    const int h = f.scale.value_or(1);
    s = f.rho_per_class.empty() ? generate_appendix_scenario(h, f.rho.value_or(7.5))
                                : generate_appendix_scenario(h, f.rho_per_class);
  }
  auto& e = s.experiment;
  if (f.horizon) {
    e.horizon = *f.horizon;
    if (!f.warmup && e.warm_up && *e.warm_up >= e.horizon) e.warm_up.reset();
  }
  if (f.warmup) e.warm_up = *f.warmup;
  if (f.reps) e.replications = *f.reps;
  if (f.seed) e.seed = *f.seed;
  if (f.lifespan) e.lifespan = parse_lifespan_family(*f.lifespan);
  if (f.trace) s.trace = *f.trace;
  if (f.timeline_bin) e.timeline_bin = *f.timeline_bin;
  if (f.out) s.output_dir = *f.out;
  return s;
}

std::vector<PolicySpec> select_policies(const ScenarioSpec& s, const std::vector<std::string>& names) {
  if (names.empty()) return s.policies;
  std::vector<PolicySpec> out;
  for (const auto& name : names) {
    PolicySpec p;
    p.name = name;
    for (const auto& q : s.policies)
      if (q.name == name) p = q;
    validate_policy_spec(p, s.network);
    out.push_back(p);
  }
  return out;
}

ExperimentOptions experiment_options(const ScenarioSpec& s, const Flags& f) {
  ExperimentOptions o;
  const auto& e = s.experiment;
  o.replications = e.replications;
  o.threads = f.threads;
  o.run.horizon = e.horizon;
  o.run.warm_up = e.warm_up;
  o.run.seed = e.seed;
  o.run.lifespan = e.lifespan;
  o.run.timeline_bin = e.timeline_bin > 0.0 ? e.timeline_bin : e.horizon / 50.0;
  if (s.trace) o.run.arrivals = load_trace(*s.trace, s.network.arrival_rate);
  return o;
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  body(out);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::size_t eligible_count(const NetworkConfig& n) {
  std::size_t c = 0;
  for (const auto& list : n.eligible) c += list.size();
  return c;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-event simulator for energy-aware task offloading in MEC systems"};
  app.require_subcommand(1);
  Flags f;
  std::string generate_out = "scenario.json";

  auto* gen = app.add_subcommand("generate", "Write the reference scenario for --scale and --rho");
  gen->add_option("--rho", f.rho, "Uniform traffic intensity")->excludes(
      gen->add_option("--rho-per-class", f.rho_per_class, "Per-class intensities")->delimiter(','));
  gen->add_option("--scale", f.scale, "Scaling parameter h (>= 1)");
  gen->add_option("--out", generate_out, "Output scenario file");
  add_experiment_flags(gen, f);

  auto* run = app.add_subcommand("run", "Run one policy and write per-replication metrics");
  add_scenario_flags(run, f);
  run->add_option("--policy", f.policies, "Policy name")->required()->expected(1);
  add_experiment_flags(run, f);
  run->add_option("--out", f.out, "Output directory");

  auto* cmp = app.add_subcommand("compare", "Run several policies and write comparison and timeline tables");
  add_scenario_flags(cmp, f);
  cmp->add_option("--policy", f.policies, "Policy names, comma separated")->delimiter(',');
  add_experiment_flags(cmp, f);
  cmp->add_option("--out", f.out, "Output directory");

  auto* val = app.add_subcommand("validate", "Check a scenario file without running it");
  val->add_option("--scenario", f.scenario, "Scenario file (JSON)")->required();
  val->add_option("--trace", f.trace, "Also check this trace file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::Success&) {
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      if (f.scale && *f.scale < 1) throw ValidationError("scaling parameter h must be >= 1");
      ScenarioSpec s = resolve_scenario(f);
      s.validate();
      save_scenario(s, generate_out);
      out << "wrote " << generate_out << " (" << s.name << ", " << eligible_count(s.network) << " eligible tuples)\n";
      return kExitOk;
    }

    if (val->parsed()) {
      const ScenarioSpec s = load_scenario(f.scenario);
      s.validate();
      const std::optional<std::string> trace = f.trace ? f.trace : s.trace;
      if (trace) load_trace(*trace, s.network.arrival_rate);
      out << "ok: " << (s.name.empty() ? f.scenario : s.name) << ": " << s.network.num_sc_groups << " SC groups, "
          << s.network.num_channels << " channels, " << s.network.num_classes << " classes, "
          << eligible_count(s.network) << " eligible tuples, " << s.policies.size() << " policies\n";
      return kExitOk;
    }

    const ScenarioSpec s = resolve_scenario(f);
    s.validate();
    const auto policies = select_policies(s, f.policies);
    ExperimentOptions opts = experiment_options(s, f);
    const std::filesystem::path dir(s.output_dir);
    std::filesystem::create_directories(dir);

    if (run->parsed()) {
      opts.relative = false;
      const ExperimentReport report = run_experiment(s.network, policies, opts);
      write_file(dir / "results.csv", [&](std::ostream& o) { write_results_csv(o, report); });
      print_summary(out, report);
      out << "wrote " << (dir / "results.csv").string() << "\n";
      return kExitOk;
    }

    opts.relative = false;
    for (const auto& p : policies)
      if (p.name == opts.baseline) opts.relative = true;
    if (!opts.relative) out << "note: " << opts.baseline << " not in the policy list; relative metrics omitted\n";
    const ExperimentReport report = run_experiment(s.network, policies, opts);
    write_file(dir / "results.csv", [&](std::ostream& o) { write_results_csv(o, report); });
    write_file(dir / "comparison.csv", [&](std::ostream& o) { write_comparison_csv(o, report); });
    write_file(dir / "timeline.csv", [&](std::ostream& o) { write_timeline_csv(o, report); });
    print_summary(out, report);
    out << "wrote " << (dir / "comparison.csv").string() << ", results.csv, timeline.csv\n";
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error[usage]: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error[parse]: " << e.what() << "\n";
    return kExitParse;
  } catch (const ValidationError& e) {
    err << "error[validation]: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error[validation]: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error[runtime]: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace mecsim
