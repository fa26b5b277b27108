#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mecsim/model.hpp"

namespace mecsim {

/// Capacity coefficients (gamma per edge SC group, eta per channel). Every
/// mutation goes through the projecting setters so entries stay >= 0, and
/// bumps `version` so cached index tables can tell they are stale.
class CapacityCoefficients {
 public:
  CapacityCoefficients() = default;
  CapacityCoefficients(int num_sc_groups, int num_channels);
  CapacityCoefficients(std::vector<double> gamma, std::vector<double> eta);

  static CapacityCoefficients zero(const NetworkConfig& config) {
    return {config.num_sc_groups, config.num_channels};
  }

  double gamma(int k) const { return gamma_[k]; }
  double eta(int i) const { return eta_[i]; }
  const std::vector<double>& gammas() const { return gamma_; }
  const std::vector<double>& etas() const { return eta_; }

  void set_gamma(int k, double value);
  void set_eta(int i, double value);

  std::uint64_t version() const { return version_; }

 private:
  std::vector<double> gamma_;
  std::vector<double> eta_;
  std::uint64_t version_ = 0;
};

/// Expected power per unit service rate, (lambda/u) eps_k w at the edge and
/// lambda bar-eps in the cloud.
double energy_efficiency_ratio(const NetworkConfig& config, int cls, const ResourceTuple& t);

/// Marginal cost psi_j(i,i',k) of placing a class-`cls` task on `t`.
double index(const NetworkConfig& config, int cls, const ResourceTuple& t, const CapacityCoefficients& coeffs);

/// Tuples of one class ordered by ascending index. Ties go to the larger
/// service rate, then to ResourceTuple order.
class IndexTable {
 public:
  struct Entry {
    ResourceTuple tuple;
    double psi = 0.0;
    double rate = 0.0;
  };

  IndexTable() = default;
  IndexTable(const NetworkConfig& config, int cls, const CapacityCoefficients& coeffs);

  const std::vector<Entry>& entries() const { return entries_; }
  int cls() const { return cls_; }
  std::uint64_t coefficients_version() const { return version_; }

 private:
  std::vector<Entry> entries_;
  int cls_ = 0;
  std::uint64_t version_ = 0;
};

/// Index ordering shared by the policies and the relaxed-problem solver.
bool index_order(double psi_a, double rate_a, const ResourceTuple& a, double psi_b, double rate_b,
                 const ResourceTuple& b);

/// Stationary law of the birth-death chain on {0..alpha.size()-1} with birth
/// rate lambda alpha(x) and death rate x u, by detailed balance.
std::vector<double> stationary_distribution(std::span<const double> alpha, double lambda, double u);

/// Largest sub-problem state, min(floor(C_k / w), N_i, N_i').
int subproblem_cap(const NetworkConfig& config, int cls, const ResourceTuple& t);

/// One bandit process of the relaxed problem with its randomized actions.
struct SubProblem {
  int cls = 0;
  ResourceTuple tuple;
  double psi = 0.0;
  double rate = 0.0;
  std::vector<double> alpha;  // size cap + 1

  double expected_occupancy(double lambda) const;
  double action_mass(double lambda) const;  // sum_x pi(x) alpha(x)
};

/// Which relaxed constraints bound the greedy raise of the action variables.
enum class RelaxedConstraints {
  kAll,         // action, SC-capacity and channel-capacity constraints
  kActionOnly,  // only the per-class action constraint (the Lagrangian minimizer)
};

struct DualPoint {
  std::vector<double> nu;
  CapacityCoefficients coefficients;
  std::vector<int> saturation;    // f_j: 0 once class j saturated, -1 otherwise
  std::vector<SubProblem> chains;  // every eligible tuple, in ranking order

  double action_constraint_lhs(int cls, const NetworkConfig& config) const;
  double sc_constraint_lhs(int group, const NetworkConfig& config) const;
  double channel_constraint_lhs(int channel, const NetworkConfig& config) const;
};

/// Greedy computation of nu*(gamma, eta) and its action variables.
DualPoint compute_nu_star(const NetworkConfig& config, const CapacityCoefficients& coeffs,
                          RelaxedConstraints mode = RelaxedConstraints::kAll);

/// Sub-gradient of the dual function in gamma_k at the policy carried by `dual`.
double subgradient_gamma(int group, const DualPoint& dual, const NetworkConfig& config);
/// Sub-gradient of the dual function in eta_i at the policy carried by `dual`.
double subgradient_eta(int channel, const DualPoint& dual, const NetworkConfig& config);
/// All K + I sub-gradients at once: gamma_1..gamma_K, then eta_1..eta_I.
std::vector<double> subgradients(const DualPoint& dual, const NetworkConfig& config);

}  // namespace mecsim
