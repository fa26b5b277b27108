#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "mecsim/appendix.hpp"
#include "mecsim/model.hpp"

namespace testing {

using namespace mecsim;

// One class, one edge group of capacity c with w = 1, one channel pair with
// capacity c each, a single eligible edge tuple with service rate u.
inline NetworkConfig single_tuple_system(int c, double lambda, double u) {
  NetworkConfig n;
  n.num_sc_groups = 1;
  n.num_channels = 2;
  n.num_classes = 1;
  n.num_areas = 1;
  n.sc_capacity = {c};
  n.channel_capacity = {c, c};
  n.occupancy = {{1}};
  n.cloud_occupancy = {1};
  n.arrival_rate = {lambda};
  n.edge_operational_power = {1.0};
  n.edge_static_power = {0.0};
  n.cloud_energy_rate = {1.0};
  n.area_map = {0};
  n.eligible.assign(1, {});
  n.set_service_rate(0, ResourceTuple{0, 1, 0}, u);
  n.validate();
  return n;
}

// Small random system: K groups, I channels, J classes, random capacities,
// requirements, forbidden pairs and eligibility. Every class keeps at least
// one cloud tuple so it is never without an eligible tuple.
inline NetworkConfig random_system(std::mt19937_64& rng, int K, int I, int J) {
  std::uniform_int_distribution<int> cap(1, 6);
  std::uniform_real_distribution<double> rate(0.2, 3.0);
  std::uniform_real_distribution<double> power(0.5, 10.0);
  std::bernoulli_distribution coin(0.5);
  NetworkConfig n;
  n.num_sc_groups = K;
  n.num_channels = I;
  n.num_classes = J;
  n.num_areas = K;
  for (int k = 0; k < K; ++k) {
    n.sc_capacity.push_back(cap(rng) + 1);
    n.edge_operational_power.push_back(power(rng));
    n.edge_static_power.push_back(0.0);
    n.area_map.push_back(k);
  }
  for (int i = 0; i < I; ++i) n.channel_capacity.push_back(cap(rng));
  for (int j = 0; j < J; ++j) {
    auto& row = n.occupancy.emplace_back();
    for (int k = 0; k < K; ++k) {
      if (coin(rng) && coin(rng)) {
        row.emplace_back(std::nullopt);
      } else {
        row.emplace_back(std::uniform_int_distribution<int>(1, n.sc_capacity[k])(rng));
      }
    }
    n.cloud_occupancy.push_back(1);
    n.arrival_rate.push_back(rate(rng));
    n.cloud_energy_rate.push_back(power(rng));
  }
  n.eligible.assign(J, {});
  for (int j = 0; j < J; ++j) {
    bool any_cloud = false;
    for (int i = 0; i < I; ++i)
      for (int i2 = 0; i2 < I; ++i2)
        for (int k = 0; k <= K; ++k) {
          if (k < K && !n.occupancy[j][k]) continue;
          if (!coin(rng)) continue;
          n.set_service_rate(j, ResourceTuple{i, i2, k}, rate(rng));
          any_cloud = any_cloud || k == K;
        }
    if (!any_cloud) n.set_service_rate(j, ResourceTuple{0, I - 1, K}, rate(rng));
  }
  n.validate();
  return n;
}

// Loads recomputed from the raw counts, independent of SystemState's own tracking.
struct Loads {
  std::vector<int> sc;
  std::vector<int> channel;
};

inline Loads recompute_loads(const SystemState& s) {
  const auto& c = s.config();
  Loads l{std::vector<int>(c.num_sc_groups, 0), std::vector<int>(c.num_channels, 0)};
  for (int j = 0; j < c.num_classes; ++j)
    for (const auto& e : c.eligible[j]) {
      const int x = s.occupancy(j, e.tuple);
      if (!c.is_cloud(e.tuple.group)) l.sc[e.tuple.group] += *c.occupancy[j][e.tuple.group] * x;
      l.channel[e.tuple.start] += x;
      l.channel[e.tuple.end] += x;
    }
  return l;
}

inline bool feasible(const Loads& l, const NetworkConfig& c) {
  for (int k = 0; k < c.num_sc_groups; ++k)
    if (l.sc[k] > c.sc_capacity[k]) return false;
  for (int i = 0; i < c.num_channels; ++i)
    if (l.channel[i] > c.channel_capacity[i]) return false;
  return true;
}

inline double erlang_b(int c, double offered) {
  double b = 1.0;
  for (int n = 1; n <= c; ++n) b = offered * b / (n + offered * b);
  return b;
}

}  // namespace testing
