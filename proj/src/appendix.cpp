#include "mecsim/appendix.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace mecsim {

namespace {

constexpr int kGroups = 3;
constexpr int kBaseChannels = 20;
constexpr int kClasses = 4;
constexpr int kAreas = 20;

constexpr std::array<int, kGroups> kBaseScCapacity{5, 5, 8};
constexpr std::array<int, kBaseChannels> kBaseChannelCapacity{8, 5, 5, 7, 6, 5, 5, 6, 5, 7,
                                                              9, 6, 6, 5, 5, 9, 9, 9, 5, 7};
constexpr std::array<double, kClasses> kBaseArrivalRate{1.097, 1.026, 1.456, 1.383};
constexpr std::array<double, kGroups> kOperationalPower{3.362, 3.996, 8.979};
constexpr double kCloudPowerScale = 20.1;
constexpr std::array<double, kClasses> kRhoPerClass{3.876, 9.115, 7.042, 8.150};

// 0 marks a forbidden (class, group) pair.
constexpr std::array<std::array<int, kGroups>, kClasses> kRequirement{{
    {3, 0, 3},
    {4, 4, 4},
    {0, 0, 2},
    {0, 0, 1},
}};

// Eligible start / end base channel slots (1-based).
const std::array<std::vector<int>, kClasses> kStartSlots{{
    {3, 5, 6, 7, 10, 12, 13, 14, 20},
    {2, 9, 17, 19},
    {2, 9, 17, 19},
    {1, 4, 6, 17, 18},
}};
const std::array<std::vector<int>, kClasses> kEndSlots{{
    {3, 5, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16},
    {2, 7, 8, 9, 10, 11, 12, 16, 19},
    {2, 8, 9, 11, 19},
    {1, 4, 17, 18, 19},
}};

constexpr double kLearnerStep = 2.0;
constexpr int kLearnerThreshold = 100;

// Concrete channels (0-based) of a set of base slots under scaling h.
std::vector<int> expand(const std::vector<int>& slots, int h) {
  std::vector<int> out;
  for (int b : slots)
    for (int r = 0; r < h; ++r) out.push_back((b - 1) * h + r);
  return out;
}

}  // namespace

std::vector<double> appendix_rho_per_class() { return {kRhoPerClass.begin(), kRhoPerClass.end()}; }

NetworkConfig appendix_network(int h, const std::vector<double>& rho) {
  if (h < 1) throw ValidationError("scaling parameter h must be >= 1, got " + std::to_string(h));
  if (rho.size() != kClasses) throw ValidationError("rho_per_class must have 4 entries");
  for (double r : rho)
    if (!(r > 0.0 && std::isfinite(r))) throw ValidationError("traffic intensities must be positive");

  NetworkConfig n;
  n.num_sc_groups = kGroups;
  n.num_channels = kBaseChannels * h;
  n.num_classes = kClasses;
  n.num_areas = kAreas;
  for (int c : kBaseScCapacity) n.sc_capacity.push_back(c * h);
  for (int i = 0; i < n.num_channels; ++i) n.channel_capacity.push_back(kBaseChannelCapacity[i / h]);
  n.edge_operational_power.assign(kOperationalPower.begin(), kOperationalPower.end());
  n.edge_static_power.assign(kGroups, 0.0);
  n.cloud_backhaul_delay = 0.0;
  for (int k = 0; k < kGroups; ++k) n.area_map.push_back(k);

  n.eligible.assign(kClasses, {});
  for (int j = 0; j < kClasses; ++j) {
    const double lambda = kBaseArrivalRate[j] * h;
    n.arrival_rate.push_back(lambda);
    n.cloud_energy_rate.push_back(kCloudPowerScale * rho[j] / lambda);

    auto& row = n.occupancy.emplace_back();
    int cheapest = -1;
    for (int k = 0; k < kGroups; ++k) {
      const int w = kRequirement[j][k];
      if (w == 0) {
        row.emplace_back(std::nullopt);
        continue;
      }
      row.emplace_back(w);
      if (cheapest < 0 || kOperationalPower[k] * w < kOperationalPower[cheapest] * kRequirement[j][cheapest])
        cheapest = k;
    }
    n.cloud_occupancy.push_back(kRequirement[j][cheapest]);

    const double u = lambda / rho[j];
    for (int i : expand(kStartSlots[j], h))
      for (int i2 : expand(kEndSlots[j], h))
        for (int k = 0; k <= kGroups; ++k)
          if (k == kGroups || row[k]) n.set_service_rate(j, ResourceTuple{i, i2, k}, u);
  }
  n.validate();
  return n;
}

namespace {

std::vector<PolicySpec> default_policies() {
  std::vector<PolicySpec> out;
  for (const auto& name : known_policies()) {
    PolicySpec p;
    p.name = name;
    if (name == "hee-alrn") {
      p.learner.delta_gamma = p.learner.delta_eta = kLearnerStep;
      p.learner.delta_gamma_plus = p.learner.delta_eta_plus = kLearnerStep;
      p.learner.threshold = kLearnerThreshold;
    }
    out.push_back(p);
  }
  return out;
}

std::string format_rho(double rho) {
  std::ostringstream os;
  os << rho;
  return os.str();
}

}  // namespace

ScenarioSpec generate_appendix_scenario(int h, double rho) {
  ScenarioSpec s;
  s.network = appendix_network(h, std::vector<double>(kClasses, rho));
  s.name = "mec-reference-h" + std::to_string(h) + "-rho" + format_rho(rho);
  s.policies = default_policies();
  s.experiment.rho = rho;
  s.experiment.scale = h;
  return s;
}

ScenarioSpec generate_appendix_scenario(int h, const std::vector<double>& rho_per_class) {
  ScenarioSpec s;
  s.network = appendix_network(h, rho_per_class);
  s.name = "mec-reference-h" + std::to_string(h) + "-heterogeneous";
  s.policies = default_policies();
  s.experiment.rho_per_class = rho_per_class;
  s.experiment.scale = h;
  return s;
}

}  // namespace mecsim
