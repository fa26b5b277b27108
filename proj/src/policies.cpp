#include "mecsim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mecsim {

PolicyDecision first_available(const IndexTable& table, const SystemState& state) {
  for (const auto& e : table.entries())
    if (tuple_available(state, table.cls(), e.tuple)) return PolicyDecision::admit(e.tuple);
  return PolicyDecision::block();
}

PolicyDecision hee_acc_decide(int cls, const SystemState& state, const CapacityCoefficients& coeffs,
                              const NetworkConfig& config) {
  return first_available(IndexTable(config, cls, coeffs), state);
}

PolicyDecision hee_acc_zero_decide(int cls, const SystemState& state, const NetworkConfig& config) {
  return hee_acc_decide(cls, state, CapacityCoefficients::zero(config), config);
}

LearnerState::LearnerState(const NetworkConfig& config, CapacityCoefficients initial, LearnerParams p)
    : coefficients(std::move(initial)), violations(config.num_sc_groups + config.num_channels, 0), params(p) {}

PolicyDecision hee_alrn_decide(int cls, const SystemState& state, LearnerState& learner, const NetworkConfig& config,
                               IndexTable* cache) {
  IndexTable local;
  const IndexTable* table = cache;
  if (cache == nullptr || cache->cls() != cls || cache->coefficients_version() != learner.coefficients.version() ||
      cache->entries().empty()) {
    local = IndexTable(config, cls, learner.coefficients);
    if (cache != nullptr) {
      *cache = local;
      table = cache;
    } else {
      table = &local;
    }
  }

  const int K = config.num_sc_groups;
  const auto& p = learner.params;
  std::vector<int> triggered;
  auto count = [&](int n) {
    if (++learner.violations[n] >= p.threshold) {
      learner.violations[n] = 0;
      triggered.push_back(n);
    }
  };

  PolicyDecision decision = PolicyDecision::block();
  for (const auto& e : table->entries()) {
    const auto& t = e.tuple;
    const unsigned v = check_tuple(state, cls, t);
    if (v == kNoViolation) {
      auto& c = learner.coefficients;
      if (!config.is_cloud(t.group)) c.set_gamma(t.group, c.gamma(t.group) - p.delta_gamma);
      c.set_eta(t.start, c.eta(t.start) - p.delta_eta);
      c.set_eta(t.end, c.eta(t.end) - p.delta_eta);
      ++learner.decrements;
      decision = PolicyDecision::admit(t);
      break;
    }
    if (v & kScViolation) count(t.group);
    if (v & kStartChannelViolation) count(K + t.start);
    if ((v & kEndChannelViolation) && !(t.end == t.start && (v & kStartChannelViolation))) count(K + t.end);
  }

  if (!triggered.empty()) {
    DualPoint dual = compute_nu_star(config, learner.coefficients, p.subgradient_constraints);
    const std::vector<double> slope = subgradients(dual, config);
    auto& c = learner.coefficients;
    for (const int m : triggered) {
      if (!(slope[m] > 0.0)) continue;
      if (m < K) {
        c.set_gamma(m, c.gamma(m) + p.delta_gamma_plus);
      } else {
        c.set_eta(m - K, c.eta(m - K) + p.delta_eta_plus);
      }
      ++learner.increments;
    }
    learner.last_dual = std::move(dual);
  }
  return decision;
}

double mrr_value(const NetworkConfig& config, int cls, const ResourceTuple& t) {
  const double lambda = config.arrival_rate[cls];
  const double u = config.service_rate(cls, t);
  if (!(u > 0.0)) throw std::invalid_argument("mrr_value: tuple " + to_string(t) + " is not eligible");
  if (config.is_cloud(t.group)) {
    const double w = config.cloud_occupancy[cls];
    return -lambda * u * config.cloud_energy_rate[cls] / ((lambda + u) * (w + 2.0));
  }
  const double w = config.requirement(cls, t.group);
  return -lambda * w * config.edge_operational_power[t.group] / ((lambda + u) * (w + 2.0));
}

namespace {

// Highest score wins; ties go to the larger service rate, then tuple order.
template <typename Score>
PolicyDecision best_available(int cls, const SystemState& state, const NetworkConfig& config, Score score) {
  const EligibleTuple* best = nullptr;
  double best_value = 0.0;
  for (const auto& e : config.eligible[cls]) {
    if (!tuple_available(state, cls, e.tuple)) continue;
    const double v = score(e.tuple);
    if (best == nullptr || v > best_value || (v == best_value && e.rate > best->rate)) {
      best = &e;
      best_value = v;
    }
  }
  return best ? PolicyDecision::admit(best->tuple) : PolicyDecision::block();
}

double default_cloud_factor(const NetworkConfig& config) { return config.max_sc_capacity() + 1.0; }

}  // namespace

PolicyDecision mrr_decide(int cls, const SystemState& state, const NetworkConfig& config) {
  return best_available(cls, state, config, [&](const ResourceTuple& t) { return mrr_value(config, cls, t); });
}

double nrm_value(const SystemState& state, const ResourceTuple& t, double cloud_factor) {
  const auto& cfg = state.config();
  const double sc = cfg.is_cloud(t.group) ? cloud_factor : cfg.sc_capacity[t.group] - state.sc_load(t.group);
  const double start = cfg.channel_capacity[t.start] - state.channel_load(t.start);
  const double end = cfg.channel_capacity[t.end] - state.channel_load(t.end);
  return sc * start * end;
}

PolicyDecision nrm_vne_decide(int cls, const SystemState& state, const NetworkConfig& config,
                              std::optional<double> cloud_factor) {
  const double factor = cloud_factor.value_or(default_cloud_factor(config));
  return best_available(cls, state, config, [&](const ResourceTuple& t) { return nrm_value(state, t, factor); });
}

const std::vector<std::string>& known_policies() {
  static const std::vector<std::string> names{"hee-acc", "hee-acc-zero", "hee-alrn", "mrr", "nrm-vne"};
  return names;
}

void validate_policy_spec(const PolicySpec& spec, const NetworkConfig& config) {
  const auto& names = known_policies();
  if (std::find(names.begin(), names.end(), spec.name) == names.end())
    throw ValidationError("unknown policy '" + spec.name + "'");
  if (!spec.initial_gamma.empty() && spec.initial_gamma.size() != static_cast<std::size_t>(config.num_sc_groups))
    throw ValidationError("policy " + spec.name + ": initial_gamma must have one entry per SC group");
  if (!spec.initial_eta.empty() && spec.initial_eta.size() != static_cast<std::size_t>(config.num_channels))
    throw ValidationError("policy " + spec.name + ": initial_eta must have one entry per channel");
  auto non_negative = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x >= 0.0; });
  };
  if (!non_negative(spec.initial_gamma) || !non_negative(spec.initial_eta))
    throw ValidationError("policy " + spec.name + ": capacity coefficients must be non-negative");
  const auto& p = spec.learner;
  for (double d : {p.delta_gamma, p.delta_eta, p.delta_gamma_plus, p.delta_eta_plus})
    if (!(std::isfinite(d) && d >= 0.0))
      throw ValidationError("policy " + spec.name + ": step sizes must be finite and non-negative");
  if (p.threshold < 1) throw ValidationError("policy " + spec.name + ": threshold M must be >= 1");
  if (spec.nrm_cloud_factor && !(*spec.nrm_cloud_factor > 0.0))
    throw ValidationError("policy " + spec.name + ": cloud_factor must be positive");
}

namespace {

CapacityCoefficients initial_coefficients(const PolicySpec& spec, const NetworkConfig& config) {
  auto gamma = spec.initial_gamma.empty() ? std::vector<double>(config.num_sc_groups, 0.0) : spec.initial_gamma;
  auto eta = spec.initial_eta.empty() ? std::vector<double>(config.num_channels, 0.0) : spec.initial_eta;
  return {std::move(gamma), std::move(eta)};
}

class HeeAccPolicy final : public Policy {
 public:
  HeeAccPolicy(const NetworkConfig& config, const CapacityCoefficients& coeffs, std::string name)
      : name_(std::move(name)) {
    for (int j = 0; j < config.num_classes; ++j) tables_.emplace_back(config, j, coeffs);
  }
  PolicyDecision decide(int cls, const SystemState& state) override { return first_available(tables_[cls], state); }
  std::string_view name() const override { return name_; }

 private:
  std::vector<IndexTable> tables_;
  std::string name_;
};

class HeeAlrnPolicy final : public Policy {
 public:
  HeeAlrnPolicy(const NetworkConfig& config, CapacityCoefficients coeffs, LearnerParams params)
      : config_(config), learner_(config, std::move(coeffs), params), tables_(config.num_classes) {}
  PolicyDecision decide(int cls, const SystemState& state) override {
    return hee_alrn_decide(cls, state, learner_, config_, &tables_[cls]);
  }
  std::string_view name() const override { return "hee-alrn"; }
  const LearnerState* learner() const override { return &learner_; }

 private:
  const NetworkConfig& config_;
  LearnerState learner_;
  std::vector<IndexTable> tables_;
};

class MrrPolicy final : public Policy {
 public:
  explicit MrrPolicy(const NetworkConfig& config) {
    // Scores are state independent, so the argmax is the first available
    // tuple in descending score order.
    for (int j = 0; j < config.num_classes; ++j) {
      std::vector<std::pair<double, EligibleTuple>> scored;
      for (const auto& e : config.eligible[j]) scored.emplace_back(mrr_value(config, j, e.tuple), e);
      std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        if (a.second.rate != b.second.rate) return a.second.rate > b.second.rate;
        return a.second.tuple < b.second.tuple;
      });
      auto& order = order_.emplace_back();
      for (const auto& s : scored) order.push_back(s.second.tuple);
    }
  }
  PolicyDecision decide(int cls, const SystemState& state) override {
    for (const auto& t : order_[cls])
      if (tuple_available(state, cls, t)) return PolicyDecision::admit(t);
    return PolicyDecision::block();
  }
  std::string_view name() const override { return "mrr"; }

 private:
  std::vector<std::vector<ResourceTuple>> order_;
};

class NrmVnePolicy final : public Policy {
 public:
  NrmVnePolicy(const NetworkConfig& config, std::optional<double> factor) : config_(config), factor_(factor) {}
  PolicyDecision decide(int cls, const SystemState& state) override {
    return nrm_vne_decide(cls, state, config_, factor_);
  }
  std::string_view name() const override { return "nrm-vne"; }

 private:
  const NetworkConfig& config_;
  std::optional<double> factor_;
};

}  // namespace

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const NetworkConfig& config) {
  validate_policy_spec(spec, config);
  if (spec.name == "hee-acc")
    return std::make_unique<HeeAccPolicy>(config, initial_coefficients(spec, config), "hee-acc");
  if (spec.name == "hee-acc-zero")
    return std::make_unique<HeeAccPolicy>(config, CapacityCoefficients::zero(config), "hee-acc-zero");
  if (spec.name == "hee-alrn")
    return std::make_unique<HeeAlrnPolicy>(config, initial_coefficients(spec, config), spec.learner);
  if (spec.name == "mrr") return std::make_unique<MrrPolicy>(config);
  return std::make_unique<NrmVnePolicy>(config, spec.nrm_cloud_factor);
}

}  // namespace mecsim
