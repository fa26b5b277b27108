#include "mecsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mecsim {

std::string to_string(const ResourceTuple& t) {
  std::ostringstream os;
  os << '(' << t.start + 1 << ',' << t.end + 1 << ',' << t.group + 1 << ')';
  return os.str();
}

void NetworkConfig::set_service_rate(int cls, const ResourceTuple& t, double rate) {
  if (eligible.size() < static_cast<std::size_t>(num_classes)) eligible.resize(num_classes);
  auto& list = eligible.at(cls);
  auto it = std::lower_bound(list.begin(), list.end(), t,
                             [](const EligibleTuple& e, const ResourceTuple& key) { return e.tuple < key; });
  if (it != list.end() && it->tuple == t) {
    if (rate > 0.0) {
      it->rate = rate;
    } else {
      list.erase(it);
    }
    return;
  }
  if (rate > 0.0) list.insert(it, EligibleTuple{t, rate});
}

double NetworkConfig::service_rate(int cls, const ResourceTuple& t) const {
  if (cls < 0 || static_cast<std::size_t>(cls) >= eligible.size()) return 0.0;
  const auto& list = eligible[cls];
  auto it = std::lower_bound(list.begin(), list.end(), t,
                             [](const EligibleTuple& e, const ResourceTuple& key) { return e.tuple < key; });
  return (it != list.end() && it->tuple == t) ? it->rate : 0.0;
}

int NetworkConfig::requirement(int cls, int group) const {
  const auto& w = occupancy.at(cls).at(group);
  if (!w) throw std::logic_error("class " + std::to_string(cls + 1) + " is forbidden on group " +
                                 std::to_string(group + 1));
  return *w;
}

double NetworkConfig::total_static_power() const {
  return std::accumulate(edge_static_power.begin(), edge_static_power.end(), 0.0);
}

int NetworkConfig::max_sc_capacity() const {
  return sc_capacity.empty() ? 0 : *std::max_element(sc_capacity.begin(), sc_capacity.end());
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

bool finite_non_negative(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x) && x >= 0.0; });
}

}  // namespace

void NetworkConfig::validate() const {
  require(num_sc_groups >= 1, "num_sc_groups must be at least 1");
  require(num_channels >= 1, "num_channels must be at least 1");
  require(num_classes >= 1, "num_classes must be at least 1");
  require(num_areas >= 1, "num_areas must be at least 1");
  const auto K = static_cast<std::size_t>(num_sc_groups);
  const auto I = static_cast<std::size_t>(num_channels);
  const auto J = static_cast<std::size_t>(num_classes);

  require(sc_capacity.size() == K, "sc_capacity must have one entry per SC group");
  require(channel_capacity.size() == I, "channel_capacity must have one entry per channel");
  require(occupancy.size() == J, "occupancy_requirement must have one row per class");
  require(cloud_occupancy.size() == J, "cloud_occupancy must have one entry per class");
  require(arrival_rate.size() == J, "arrival_rate must have one entry per class");
  require(edge_operational_power.size() == K, "edge_operational_power must have one entry per SC group");
  require(edge_static_power.size() == K, "edge_static_power must have one entry per SC group");
  require(cloud_energy_rate.size() == J, "cloud_energy_rate must have one entry per class");
  require(area_map.size() == K, "area_map must have one entry per SC group");
  require(eligible.size() == J, "service rates must be given per class");

  for (std::size_t k = 0; k < K; ++k)
    require(sc_capacity[k] >= 1, "sc_capacity: C_" + std::to_string(k + 1) + " must be >= 1");
  for (std::size_t i = 0; i < I; ++i)
    require(channel_capacity[i] >= 1, "channel_capacity: N_" + std::to_string(i + 1) + " must be >= 1");
  for (std::size_t k = 0; k < K; ++k)
    require(area_map[k] >= 0 && area_map[k] < num_areas,
            "area_map: group " + std::to_string(k + 1) + " maps outside [1, L]");

  for (std::size_t j = 0; j < J; ++j) {
    require(occupancy[j].size() == K, "occupancy_requirement row " + std::to_string(j + 1) + " has wrong length");
    for (std::size_t k = 0; k < K; ++k) {
      const auto& w = occupancy[j][k];
      if (!w) continue;
      require(*w >= 1 && *w <= sc_capacity[k], "occupancy_requirement: w_{" + std::to_string(j + 1) + "," +
                                                   std::to_string(k + 1) + "} must lie in [1, C_" +
                                                   std::to_string(k + 1) + "]");
    }
    require(cloud_occupancy[j] >= 1, "cloud_occupancy must be >= 1");
  }

  require(finite_non_negative(arrival_rate), "arrival_rate must be finite and non-negative");
  require(finite_non_negative(edge_operational_power), "edge_operational_power must be finite and non-negative");
  require(finite_non_negative(edge_static_power), "edge_static_power must be finite and non-negative");
  require(finite_non_negative(cloud_energy_rate), "cloud_energy_rate must be finite and non-negative");
  require(std::isfinite(cloud_backhaul_delay) && cloud_backhaul_delay >= 0.0,
          "cloud_backhaul_delay must be finite and non-negative");

  for (std::size_t j = 0; j < J; ++j) {
    const auto& list = eligible[j];
    for (std::size_t n = 0; n < list.size(); ++n) {
      const auto& e = list[n];
      const auto& t = e.tuple;
      const std::string where = "service rate for class " + std::to_string(j + 1) + " on " + to_string(t);
      require(t.start >= 0 && t.start < num_channels && t.end >= 0 && t.end < num_channels,
              where + ": channel out of range");
      require(t.group >= 0 && t.group <= num_sc_groups, where + ": group out of range");
      require(std::isfinite(e.rate) && e.rate > 0.0, where + ": rate must be finite and positive");
      if (!is_cloud(t.group))
        require(!forbidden(static_cast<int>(j), t.group), where + ": class is forbidden on this group");
      if (n > 0) require(list[n - 1].tuple < t, where + ": duplicate or unsorted tuple");
    }
  }
}

double transmission_rate(const ChannelPhysics& phys) {
  if (!(phys.bandwidth > 0.0)) throw std::invalid_argument("transmission_rate: bandwidth must be positive");
  if (!(phys.noise_power > 0.0)) throw std::invalid_argument("transmission_rate: noise power must be positive");
  const double snr = phys.transmit_power * phys.channel_gain / phys.noise_power;
  if (snr < ChannelPhysics::kSnrThreshold) return 0.0;
  return phys.bandwidth * std::log2(1.0 + snr);
}

double cloud_duration(double mu, const NetworkConfig& config) {
  if (!(mu > 0.0)) throw std::invalid_argument("cloud_duration: transmission rate must be positive");
  return 1.0 / mu + config.cloud_backhaul_delay;
}

SystemState::SystemState(const NetworkConfig& config)
    : config_(&config),
      counts_(static_cast<std::size_t>(config.num_channels) * config.num_channels * config.num_classes *
                  (config.num_sc_groups + 1),
              0),
      sc_load_(config.num_sc_groups, 0),
      channel_load_(config.num_channels, 0) {}

std::size_t SystemState::slot(int cls, const ResourceTuple& t) const {
  const auto I = static_cast<std::size_t>(config_->num_channels);
  const auto G = static_cast<std::size_t>(config_->num_sc_groups + 1);
  return ((static_cast<std::size_t>(cls) * G + t.group) * I + t.start) * I + t.end;
}

int channel_footprint(const ResourceTuple& t, int channel) {
  return (t.start == channel ? 1 : 0) + (t.end == channel ? 1 : 0);
}

void SystemState::admit(int cls, const ResourceTuple& t) {
  if (check_tuple(*this, cls, t) != kNoViolation)
    throw std::logic_error("admission of class " + std::to_string(cls + 1) + " on " + to_string(t) +
                           " exceeds capacity");
  ++counts_[slot(cls, t)];
  if (!config_->is_cloud(t.group)) sc_load_[t.group] += config_->requirement(cls, t.group);
  ++channel_load_[t.start];
  ++channel_load_[t.end];
  ++total_;
}

void SystemState::release(int cls, const ResourceTuple& t) {
  auto& c = counts_[slot(cls, t)];
  if (c == 0)
    throw std::logic_error("release of class " + std::to_string(cls + 1) + " on " + to_string(t) +
                           " with no task present");
  --c;
  if (!config_->is_cloud(t.group)) sc_load_[t.group] -= config_->requirement(cls, t.group);
  --channel_load_[t.start];
  --channel_load_[t.end];
  --total_;
}

bool SystemState::loads_consistent() const {
  const auto& cfg = *config_;
  std::vector<int> sc(cfg.num_sc_groups, 0);
  std::vector<int> ch(cfg.num_channels, 0);
  std::int64_t total = 0;
  for (int j = 0; j < cfg.num_classes; ++j) {
    for (int k = 0; k <= cfg.num_sc_groups; ++k) {
      for (int i = 0; i < cfg.num_channels; ++i) {
        for (int i2 = 0; i2 < cfg.num_channels; ++i2) {
          const int x = counts_[slot(j, ResourceTuple{i, i2, k})];
          if (x == 0) continue;
          if (x < 0) return false;
          if (!cfg.is_cloud(k)) sc[k] += cfg.requirement(j, k) * x;
          ch[i] += x;
          ch[i2] += x;
          total += x;
        }
      }
    }
  }
  return sc == sc_load_ && ch == channel_load_ && total == total_;
}

bool SystemState::within_capacity() const {
  for (int k = 0; k < config_->num_sc_groups; ++k)
    if (sc_load_[k] > config_->sc_capacity[k]) return false;
  for (int i = 0; i < config_->num_channels; ++i)
    if (channel_load_[i] > config_->channel_capacity[i]) return false;
  return true;
}

unsigned check_tuple(const SystemState& state, int cls, const ResourceTuple& t) {
  const auto& cfg = state.config();
  unsigned v = kNoViolation;
  if (!cfg.is_cloud(t.group)) {
    const auto& w = cfg.occupancy[cls][t.group];
    if (!w || state.sc_load(t.group) + *w > cfg.sc_capacity[t.group]) v |= kScViolation;
  }
  const int fp = channel_footprint(t, t.start);
  if (state.channel_load(t.start) + fp > cfg.channel_capacity[t.start]) v |= kStartChannelViolation;
  if (state.channel_load(t.end) + fp > cfg.channel_capacity[t.end]) v |= kEndChannelViolation;
  return v;
}

std::vector<ResourceTuple> available_tuples(const SystemState& state, int cls) {
  std::vector<ResourceTuple> out;
  for (const auto& e : state.config().eligible[cls])
    if (tuple_available(state, cls, e.tuple)) out.push_back(e.tuple);
  return out;
}

double task_power(const NetworkConfig& config, int cls, const ResourceTuple& t) {
  if (config.is_cloud(t.group)) return config.cloud_energy_rate[cls] * config.service_rate(cls, t);
  return config.edge_operational_power[t.group] * config.requirement(cls, t.group);
}

double instantaneous_power(const SystemState& state) {
  const auto& cfg = state.config();
  double edge = 0.0;
  double cloud = 0.0;
  for (int j = 0; j < cfg.num_classes; ++j) {
    for (const auto& e : cfg.eligible[j]) {
      const int x = state.occupancy(j, e.tuple);
      if (x == 0) continue;
      if (cfg.is_cloud(e.tuple.group)) {
        cloud += cfg.cloud_energy_rate[j] * e.rate * x;
      } else {
        edge += cfg.edge_operational_power[e.tuple.group] * cfg.requirement(j, e.tuple.group) * x;
      }
    }
  }
  return edge + cfg.total_static_power() + cloud;
}

}  // namespace mecsim
