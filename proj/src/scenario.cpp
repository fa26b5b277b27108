#include "mecsim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mecsim {

using nlohmann::json;

void ScenarioSpec::validate() const {
  if (schema_version != kScenarioSchemaVersion)
    throw ValidationError("schema_version " + std::to_string(schema_version) + " is not supported");
  network.validate();
  if (policies.empty()) throw ValidationError("policies: at least one policy is required");
  for (const auto& p : policies) validate_policy_spec(p, network);

  const auto& e = experiment;
  if (e.rho.has_value() == e.rho_per_class.has_value())
    throw ValidationError("experiment: exactly one of rho and rho_per_class must be given");
  if (e.rho && !(*e.rho > 0.0 && std::isfinite(*e.rho))) throw ValidationError("experiment: rho must be positive");
  if (e.rho_per_class) {
    if (e.rho_per_class->size() != static_cast<std::size_t>(network.num_classes))
      throw ValidationError("experiment: rho_per_class must have one entry per class");
    for (double r : *e.rho_per_class)
      if (!(r > 0.0 && std::isfinite(r))) throw ValidationError("experiment: rho_per_class entries must be positive");
  }
  if (e.scale < 1) throw ValidationError("experiment: scale h must be >= 1");
  if (!(e.horizon > 0.0 && std::isfinite(e.horizon))) throw ValidationError("experiment: horizon must be positive");
  if (e.warm_up && !(*e.warm_up >= 0.0 && *e.warm_up < e.horizon))
    throw ValidationError("experiment: warm_up must lie in [0, horizon)");
  if (e.replications < 1) throw ValidationError("experiment: replications must be >= 1");
  if (!(e.timeline_bin >= 0.0)) throw ValidationError("experiment: timeline_bin must be non-negative");
}

namespace {

json network_to_json(const NetworkConfig& n) {
  json j;
  j["num_sc_groups"] = n.num_sc_groups;
  j["num_channels"] = n.num_channels;
  j["num_classes"] = n.num_classes;
  j["num_areas"] = n.num_areas;
  j["sc_capacity"] = n.sc_capacity;
  j["channel_capacity"] = n.channel_capacity;
  json w = json::array();
  for (const auto& row : n.occupancy) {
    json r = json::array();
    for (const auto& v : row) r.push_back(v ? json(*v) : json("forbidden"));
    w.push_back(r);
  }
  j["occupancy_requirement"] = w;
  j["cloud_occupancy"] = n.cloud_occupancy;
  j["arrival_rate"] = n.arrival_rate;
  j["edge_operational_power"] = n.edge_operational_power;
  j["edge_static_power"] = n.edge_static_power;
  j["cloud_energy_rate"] = n.cloud_energy_rate;
  j["cloud_backhaul_delay"] = n.cloud_backhaul_delay;
  json areas = json::array();
  for (int a : n.area_map) areas.push_back(a + 1);
  j["area_map"] = areas;
  json rates = json::array();
  for (std::size_t c = 0; c < n.eligible.size(); ++c)
    for (const auto& e : n.eligible[c])
      rates.push_back({static_cast<int>(c) + 1, e.tuple.start + 1, e.tuple.end + 1, e.tuple.group + 1, e.rate});
  j["service_rates"] = rates;
  return j;
}

json policy_to_json(const PolicySpec& p) {
  json j;
  j["name"] = p.name;
  if (!p.initial_gamma.empty()) j["initial_gamma"] = p.initial_gamma;
  if (!p.initial_eta.empty()) j["initial_eta"] = p.initial_eta;
  if (p.name == "hee-alrn") {
    j["delta_gamma"] = p.learner.delta_gamma;
    j["delta_eta"] = p.learner.delta_eta;
    j["delta_gamma_plus"] = p.learner.delta_gamma_plus;
    j["delta_eta_plus"] = p.learner.delta_eta_plus;
    j["threshold"] = p.learner.threshold;
    j["subgradient_constraints"] =
        p.learner.subgradient_constraints == RelaxedConstraints::kAll ? "all" : "action-only";
  }
  if (p.nrm_cloud_factor) j["cloud_factor"] = *p.nrm_cloud_factor;
  return j;
}

// Typed access with path-qualified diagnostics.
class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw ParseError(source_ + ": " + path + ": " + what);
  }

  const json& field(const json& obj, const std::string& key, const std::string& path) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required field");
    return *it;
  }

  template <typename T>
  T as(const json& v, const std::string& path) const {
    try {
      if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
        if (!v.is_number_integer()) fail(path, "expected an integer");
      } else if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) fail(path, "expected a number");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      fail(path, e.what());
    }
  }

  template <typename T>
  T get(const json& obj, const std::string& key, const std::string& path) const {
    return as<T>(field(obj, key, path), path + "." + key);
  }

  template <typename T>
  std::vector<T> list(const json& obj, const std::string& key, const std::string& path) const {
    const json& v = field(obj, key, path);
    if (!v.is_array()) fail(path + "." + key, "expected an array");
    std::vector<T> out;
    for (std::size_t n = 0; n < v.size(); ++n)
      out.push_back(as<T>(v[n], path + "." + key + "[" + std::to_string(n) + "]"));
    return out;
  }

 private:
  std::string source_;
};

NetworkConfig network_from_json(const json& j, const Reader& rd) {
  const std::string p = "network";
  NetworkConfig n;
  n.num_sc_groups = rd.get<int>(j, "num_sc_groups", p);
  n.num_channels = rd.get<int>(j, "num_channels", p);
  n.num_classes = rd.get<int>(j, "num_classes", p);
  n.num_areas = rd.get<int>(j, "num_areas", p);
  n.sc_capacity = rd.list<int>(j, "sc_capacity", p);
  n.channel_capacity = rd.list<int>(j, "channel_capacity", p);

  const json& w = rd.field(j, "occupancy_requirement", p);
  if (!w.is_array()) rd.fail(p + ".occupancy_requirement", "expected an array of rows");
  for (std::size_t r = 0; r < w.size(); ++r) {
    const std::string rp = p + ".occupancy_requirement[" + std::to_string(r) + "]";
    if (!w[r].is_array()) rd.fail(rp, "expected an array");
    auto& row = n.occupancy.emplace_back();
    for (std::size_t k = 0; k < w[r].size(); ++k) {
      const json& v = w[r][k];
      if (v.is_string() && v.get<std::string>() == "forbidden") {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(rd.as<int>(v, rp + "[" + std::to_string(k) + "]"));
      }
    }
  }
  n.cloud_occupancy = rd.list<int>(j, "cloud_occupancy", p);
  n.arrival_rate = rd.list<double>(j, "arrival_rate", p);
  n.edge_operational_power = rd.list<double>(j, "edge_operational_power", p);
  n.edge_static_power = rd.list<double>(j, "edge_static_power", p);
  n.cloud_energy_rate = rd.list<double>(j, "cloud_energy_rate", p);
  n.cloud_backhaul_delay = rd.get<double>(j, "cloud_backhaul_delay", p);
  for (int a : rd.list<int>(j, "area_map", p)) n.area_map.push_back(a - 1);

  const json& rates = rd.field(j, "service_rates", p);
  if (!rates.is_array()) rd.fail(p + ".service_rates", "expected an array of [class, start, end, group, rate]");
  if (n.num_classes < 1) rd.fail(p + ".num_classes", "must be at least 1");
  n.eligible.assign(n.num_classes, {});
  for (std::size_t r = 0; r < rates.size(); ++r) {
    const std::string rp = p + ".service_rates[" + std::to_string(r) + "]";
    const json& row = rates[r];
    if (!row.is_array() || row.size() != 5) rd.fail(rp, "expected [class, start, end, group, rate]");
    const int c = rd.as<int>(row[0], rp + "[0]");
    const int i = rd.as<int>(row[1], rp + "[1]");
    const int i2 = rd.as<int>(row[2], rp + "[2]");
    const int k = rd.as<int>(row[3], rp + "[3]");
    const double u = rd.as<double>(row[4], rp + "[4]");
    if (c < 1 || c > n.num_classes) rd.fail(rp, "class index out of range");
    if (i < 1 || i > n.num_channels || i2 < 1 || i2 > n.num_channels) rd.fail(rp, "channel index out of range");
    if (k < 1 || k > n.num_sc_groups + 1) rd.fail(rp, "SC group index out of range (cloud is K+1)");
    if (!(u >= 0.0 && std::isfinite(u))) rd.fail(rp, "service rate must be finite and non-negative");
    const ResourceTuple t{i - 1, i2 - 1, k - 1};
    if (n.service_rate(c - 1, t) > 0.0) rd.fail(rp, "duplicate tuple " + to_string(t));
    n.set_service_rate(c - 1, t, u);
  }
  return n;
}

PolicySpec policy_from_json(const json& j, const std::string& path, const Reader& rd) {
  PolicySpec p;
  if (j.is_string()) {
    p.name = j.get<std::string>();
    return p;
  }
  p.name = rd.get<std::string>(j, "name", path);
  if (j.contains("initial_gamma")) p.initial_gamma = rd.list<double>(j, "initial_gamma", path);
  if (j.contains("initial_eta")) p.initial_eta = rd.list<double>(j, "initial_eta", path);
  if (j.contains("delta_gamma")) p.learner.delta_gamma = rd.get<double>(j, "delta_gamma", path);
  if (j.contains("delta_eta")) p.learner.delta_eta = rd.get<double>(j, "delta_eta", path);
  if (j.contains("delta_gamma_plus")) p.learner.delta_gamma_plus = rd.get<double>(j, "delta_gamma_plus", path);
  if (j.contains("delta_eta_plus")) p.learner.delta_eta_plus = rd.get<double>(j, "delta_eta_plus", path);
  if (j.contains("threshold")) p.learner.threshold = rd.get<int>(j, "threshold", path);
  if (j.contains("subgradient_constraints")) {
    const auto mode = rd.get<std::string>(j, "subgradient_constraints", path);
    if (mode == "all") {
      p.learner.subgradient_constraints = RelaxedConstraints::kAll;
    } else if (mode == "action-only") {
      p.learner.subgradient_constraints = RelaxedConstraints::kActionOnly;
    } else {
      rd.fail(path + ".subgradient_constraints", "expected \"all\" or \"action-only\"");
    }
  }
  if (j.contains("cloud_factor")) p.nrm_cloud_factor = rd.get<double>(j, "cloud_factor", path);
  return p;
}

}  // namespace

std::string dump_scenario(const ScenarioSpec& spec) {
  json j;
  j["schema_version"] = spec.schema_version;
  j["name"] = spec.name;
  j["network"] = network_to_json(spec.network);
  json pols = json::array();
  for (const auto& p : spec.policies) pols.push_back(policy_to_json(p));
  j["policies"] = pols;
  const auto& e = spec.experiment;
  json ex;
  if (e.rho) ex["rho"] = *e.rho;
  if (e.rho_per_class) ex["rho_per_class"] = *e.rho_per_class;
  ex["scale"] = e.scale;
  ex["horizon"] = e.horizon;
  if (e.warm_up) ex["warmup"] = *e.warm_up;
  ex["replications"] = e.replications;
  ex["seed"] = e.seed;
  ex["lifespan"] = lifespan_family_name(e.lifespan);
  ex["timeline_bin"] = e.timeline_bin;
  j["experiment"] = ex;
  if (spec.trace) j["trace"] = *spec.trace;
  j["output_dir"] = spec.output_dir;
  return j.dump(2) + "\n";
}

ScenarioSpec parse_scenario(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
  const Reader rd(source);
  if (!j.is_object()) rd.fail("$", "expected a JSON object");

  ScenarioSpec s;
  s.schema_version = rd.get<int>(j, "schema_version", "$");
  if (j.contains("name")) s.name = rd.get<std::string>(j, "name", "$");
  s.network = network_from_json(rd.field(j, "network", "$"), rd);

  const json& pols = rd.field(j, "policies", "$");
  if (!pols.is_array()) rd.fail("policies", "expected an array");
  for (std::size_t n = 0; n < pols.size(); ++n)
    s.policies.push_back(policy_from_json(pols[n], "policies[" + std::to_string(n) + "]", rd));

  const json& ex = rd.field(j, "experiment", "$");
  const std::string ep = "experiment";
  auto& e = s.experiment;
  if (ex.contains("rho")) e.rho = rd.get<double>(ex, "rho", ep);
  if (ex.contains("rho_per_class")) e.rho_per_class = rd.list<double>(ex, "rho_per_class", ep);
  if (ex.contains("scale")) e.scale = rd.get<int>(ex, "scale", ep);
  if (ex.contains("horizon")) e.horizon = rd.get<double>(ex, "horizon", ep);
  if (ex.contains("warmup")) e.warm_up = rd.get<double>(ex, "warmup", ep);
  if (ex.contains("replications")) e.replications = rd.get<int>(ex, "replications", ep);
  if (ex.contains("seed")) e.seed = rd.get<std::uint64_t>(ex, "seed", ep);
  if (ex.contains("lifespan")) {
    try {
      e.lifespan = parse_lifespan_family(rd.get<std::string>(ex, "lifespan", ep));
    } catch (const std::invalid_argument& err) {
      rd.fail(ep + ".lifespan", err.what());
    }
  }
  if (ex.contains("timeline_bin")) e.timeline_bin = rd.get<double>(ex, "timeline_bin", ep);

  if (j.contains("trace") && !j["trace"].is_null()) s.trace = rd.get<std::string>(j, "trace", "$");
  if (j.contains("output_dir")) s.output_dir = rd.get<std::string>(j, "output_dir", "$");
  return s;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

void save_scenario(const ScenarioSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write scenario file");
  out << dump_scenario(spec);
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace mecsim
