#include "mecsim/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace mecsim {

CapacityCoefficients::CapacityCoefficients(int num_sc_groups, int num_channels)
    : gamma_(num_sc_groups, 0.0), eta_(num_channels, 0.0) {}

CapacityCoefficients::CapacityCoefficients(std::vector<double> gamma, std::vector<double> eta)
    : gamma_(std::move(gamma)), eta_(std::move(eta)) {
  for (double& g : gamma_) g = std::max(0.0, g);
  for (double& e : eta_) e = std::max(0.0, e);
}

void CapacityCoefficients::set_gamma(int k, double value) {
  value = std::max(0.0, value);
  if (gamma_[k] != value) {
    gamma_[k] = value;
    ++version_;
  }
}

void CapacityCoefficients::set_eta(int i, double value) {
  value = std::max(0.0, value);
  if (eta_[i] != value) {
    eta_[i] = value;
    ++version_;
  }
}

namespace {

double eligible_rate(const NetworkConfig& config, int cls, const ResourceTuple& t, const char* who) {
  const double u = config.service_rate(cls, t);
  if (!(u > 0.0))
    throw std::invalid_argument(std::string(who) + ": tuple " + to_string(t) + " is not eligible for class " +
                                std::to_string(cls + 1));
  return u;
}

double ratio_term(const NetworkConfig& config, int cls, const ResourceTuple& t, double u) {
  const double lambda = config.arrival_rate[cls];
  if (config.is_cloud(t.group)) return lambda * config.cloud_energy_rate[cls];
  return lambda / u * config.edge_operational_power[t.group] * config.requirement(cls, t.group);
}

// Index of an eligible tuple whose service rate u is already known.
double index_at(const NetworkConfig& config, int cls, const ResourceTuple& t, double u,
                const CapacityCoefficients& coeffs) {
  const double lambda = config.arrival_rate[cls];
  double penalty = coeffs.eta(t.start) + coeffs.eta(t.end);
  if (!config.is_cloud(t.group)) penalty += config.requirement(cls, t.group) * coeffs.gamma(t.group);
  return ratio_term(config, cls, t, u) + (1.0 + lambda / u) * penalty;
}

}  // namespace

double energy_efficiency_ratio(const NetworkConfig& config, int cls, const ResourceTuple& t) {
  return ratio_term(config, cls, t, eligible_rate(config, cls, t, "energy_efficiency_ratio"));
}

double index(const NetworkConfig& config, int cls, const ResourceTuple& t, const CapacityCoefficients& coeffs) {
  return index_at(config, cls, t, eligible_rate(config, cls, t, "index"), coeffs);
}

bool index_order(double psi_a, double rate_a, const ResourceTuple& a, double psi_b, double rate_b,
                 const ResourceTuple& b) {
  if (psi_a != psi_b) return psi_a < psi_b;
  if (rate_a != rate_b) return rate_a > rate_b;
  return a < b;
}

IndexTable::IndexTable(const NetworkConfig& config, int cls, const CapacityCoefficients& coeffs)
    : cls_(cls), version_(coeffs.version()) {
  const auto& list = config.eligible.at(cls);
  entries_.reserve(list.size());
  for (const auto& e : list) entries_.push_back(Entry{e.tuple, index_at(config, cls, e.tuple, e.rate, coeffs), e.rate});
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return index_order(a.psi, a.rate, a.tuple, b.psi, b.rate, b.tuple);
  });
}

std::vector<double> stationary_distribution(std::span<const double> alpha, double lambda, double u) {
  if (alpha.empty()) throw std::invalid_argument("stationary_distribution: empty state space");
  if (!(lambda > 0.0) || !(u > 0.0))
    throw std::invalid_argument("stationary_distribution: rates must be positive");
  std::vector<double> pi(alpha.size(), 0.0);
  pi[0] = 1.0;
  for (std::size_t x = 0; x + 1 < alpha.size(); ++x) {
    const double a = alpha[x];
    if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("stationary_distribution: alpha outside [0,1]");
    pi[x + 1] = pi[x] * lambda * a / (static_cast<double>(x + 1) * u);
    if (pi[x + 1] > 1e250) {
      for (std::size_t y = 0; y <= x + 1; ++y) pi[y] *= 1e-250;
    }
  }
  const double last = alpha.back();
  if (!(last >= 0.0 && last <= 1.0)) throw std::invalid_argument("stationary_distribution: alpha outside [0,1]");
  double total = 0.0;
  for (double p : pi) total += p;
  for (double& p : pi) p /= total;
  return pi;
}

int subproblem_cap(const NetworkConfig& config, int cls, const ResourceTuple& t) {
  int cap = std::min(config.channel_capacity[t.start], config.channel_capacity[t.end]);
  if (!config.is_cloud(t.group)) cap = std::min(cap, config.sc_capacity[t.group] / config.requirement(cls, t.group));
  return cap;
}

double SubProblem::expected_occupancy(double lambda) const {
  const auto pi = stationary_distribution(alpha, lambda, rate);
  double e = 0.0;
  for (std::size_t x = 0; x < pi.size(); ++x) e += pi[x] * static_cast<double>(x);
  return e;
}

double SubProblem::action_mass(double lambda) const {
  const auto pi = stationary_distribution(alpha, lambda, rate);
  double m = 0.0;
  for (std::size_t x = 0; x < pi.size(); ++x) m += pi[x] * alpha[x];
  return m;
}

double DualPoint::action_constraint_lhs(int cls, const NetworkConfig& config) const {
  double lhs = 0.0;
  for (const auto& c : chains)
    if (c.cls == cls) lhs += c.action_mass(config.arrival_rate[cls]);
  return lhs;
}

double DualPoint::sc_constraint_lhs(int group, const NetworkConfig& config) const {
  double lhs = 0.0;
  for (const auto& c : chains)
    if (c.tuple.group == group)
      lhs += config.requirement(c.cls, group) * c.expected_occupancy(config.arrival_rate[c.cls]);
  return lhs;
}

double DualPoint::channel_constraint_lhs(int channel, const NetworkConfig& config) const {
  double lhs = 0.0;
  for (const auto& c : chains) {
    const int fp = channel_footprint(c.tuple, channel);
    if (fp > 0) lhs += fp * c.expected_occupancy(config.arrival_rate[c.cls]);
  }
  return lhs;
}

namespace {

constexpr double kBindTolerance = 1e-12;

bool reaches(double lhs, double target) {
  return lhs >= target - kBindTolerance * std::max(1.0, std::abs(target));
}

struct ChainMoments {
  double mass = 0.0;
  double occupancy = 0.0;
};

ChainMoments moments(const std::vector<double>& alpha, double lambda, double u) {
  // Unnormalized detailed-balance weights, accumulated without storing pi.
  double p = 1.0;
  double total = 1.0;
  ChainMoments m;
  m.mass = alpha[0];
  for (std::size_t x = 0; x + 1 < alpha.size(); ++x) {
    p *= lambda * alpha[x] / (static_cast<double>(x + 1) * u);
    if (p == 0.0) break;
    total += p;
    m.mass += p * alpha[x + 1];
    m.occupancy += p * static_cast<double>(x + 1);
    if (p > 1e250) {
      p *= 1e-250;
      total *= 1e-250;
      m.mass *= 1e-250;
      m.occupancy *= 1e-250;
    }
  }
  m.mass /= total;
  m.occupancy /= total;
  return m;
}

// Smallest a in [0,1] where lhs(a) reaches target; 1 with bound=false when it
// never does. lhs is continuous and non-decreasing in a.
struct Threshold {
  double a = 1.0;
  bool bound = false;
};

Threshold smallest_binding(const std::function<double(double)>& lhs, double target) {
  if (reaches(lhs(0.0), target)) return {0.0, true};
  if (!reaches(lhs(1.0), target)) return {1.0, false};
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (reaches(lhs(mid), target)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {hi, true};
}

}  // namespace

DualPoint compute_nu_star(const NetworkConfig& config, const CapacityCoefficients& coeffs, RelaxedConstraints mode) {
  const int J = config.num_classes;
  DualPoint dual;
  dual.nu.assign(J, 0.0);
  dual.saturation.assign(J, -1);
  dual.coefficients = coeffs;

  struct Key {
    double psi;
    double rate;
    ResourceTuple tuple;
    int cls;
  };
  std::vector<Key> keys;
  for (int j = 0; j < J; ++j) {
    if (config.eligible.at(j).empty())
      throw std::invalid_argument("compute_nu_star: class " + std::to_string(j + 1) + " has no eligible tuple");
    for (const auto& e : config.eligible[j])
      keys.push_back(Key{index_at(config, j, e.tuple, e.rate, coeffs), e.rate, e.tuple, j});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
    if (a.psi == b.psi && a.rate == b.rate && a.tuple == b.tuple) return a.cls < b.cls;
    return index_order(a.psi, a.rate, a.tuple, b.psi, b.rate, b.tuple);
  });
  dual.chains.reserve(keys.size());
  for (const auto& k : keys) {
    SubProblem c;
    c.cls = k.cls;
    c.tuple = k.tuple;
    c.rate = k.rate;
    c.psi = k.psi;
    c.alpha.assign(subproblem_cap(config, k.cls, k.tuple) + 1, 0.0);
    dual.chains.push_back(std::move(c));
  }

  const bool capacity = mode == RelaxedConstraints::kAll;
  std::vector<double> action_lhs(J, 0.0);
  std::vector<double> sc_lhs(config.num_sc_groups, 0.0);
  std::vector<double> channel_lhs(config.num_channels, 0.0);

  for (auto& chain : dual.chains) {
    const int j = chain.cls;
    if (dual.saturation[j] == 0) continue;
    const double lambda = config.arrival_rate[j];
    const auto& t = chain.tuple;
    const bool edge = !config.is_cloud(t.group);
    const int w = edge ? config.requirement(j, t.group) : 0;
    const int fp_start = channel_footprint(t, t.start);
    const bool same_channel = t.start == t.end;

    ChainMoments current = moments(chain.alpha, lambda, chain.rate);
    for (std::size_t x = 0; x < chain.alpha.size(); ++x) {
      auto trial = [&](double a) {
        const double saved = chain.alpha[x];
        chain.alpha[x] = a;
        const ChainMoments m = moments(chain.alpha, lambda, chain.rate);
        chain.alpha[x] = saved;
        return m;
      };
      const double act_rest = action_lhs[j] - current.mass;
      const Threshold a1 = smallest_binding([&](double a) { return act_rest + trial(a).mass; }, 1.0);

      Threshold a2;
      Threshold a3;
      if (capacity) {
        if (edge) {
          const double rest = sc_lhs[t.group] - w * current.occupancy;
          a2 = smallest_binding([&](double a) { return rest + w * trial(a).occupancy; },
                                config.sc_capacity[t.group]);
        }
        const double rest_start = channel_lhs[t.start] - fp_start * current.occupancy;
        a3 = smallest_binding([&](double a) { return rest_start + fp_start * trial(a).occupancy; },
                              config.channel_capacity[t.start]);
        if (!same_channel) {
          const double rest_end = channel_lhs[t.end] - current.occupancy;
          const Threshold end = smallest_binding([&](double a) { return rest_end + trial(a).occupancy; },
                                                 config.channel_capacity[t.end]);
          if (end.a < a3.a || (end.a == a3.a && end.bound)) a3 = end;
        }
      }

      const double a = std::min({a1.a, a2.a, a3.a});
      chain.alpha[x] = a;
      const ChainMoments next = moments(chain.alpha, lambda, chain.rate);
      action_lhs[j] += next.mass - current.mass;
      if (edge) sc_lhs[t.group] += w * (next.occupancy - current.occupancy);
      channel_lhs[t.start] += fp_start * (next.occupancy - current.occupancy);
      if (!same_channel) channel_lhs[t.end] += next.occupancy - current.occupancy;
      current = next;

      if (a1.bound && a1.a == a) {
        dual.saturation[j] = 0;
        dual.nu[j] = chain.psi;
        break;
      }
      // A binding capacity constraint closes this tuple; the class moves on.
      if ((a2.bound && a2.a == a) || (a3.bound && a3.a == a)) break;
    }
  }
  return dual;
}

std::vector<double> subgradients(const DualPoint& dual, const NetworkConfig& config) {
  const int K = config.num_sc_groups;
  std::vector<double> lhs(K + config.num_channels, 0.0);
  for (const auto& c : dual.chains) {
    if (c.alpha.empty() || c.alpha[0] == 0.0) continue;  // never leaves state 0
    const double occ = moments(c.alpha, config.arrival_rate[c.cls], c.rate).occupancy;
    if (!config.is_cloud(c.tuple.group)) lhs[c.tuple.group] += config.requirement(c.cls, c.tuple.group) * occ;
    lhs[K + c.tuple.start] += occ;
    lhs[K + c.tuple.end] += occ;
  }
  for (int k = 0; k < K; ++k) lhs[k] -= config.sc_capacity[k];
  for (int i = 0; i < config.num_channels; ++i) lhs[K + i] -= config.channel_capacity[i];
  return lhs;
}

double subgradient_gamma(int group, const DualPoint& dual, const NetworkConfig& config) {
  return dual.sc_constraint_lhs(group, config) - config.sc_capacity[group];
}

double subgradient_eta(int channel, const DualPoint& dual, const NetworkConfig& config) {
  return dual.channel_constraint_lhs(channel, config) - config.channel_capacity[channel];
}

}  // namespace mecsim
