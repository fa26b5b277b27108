#pragma once

#include <vector>

#include "mecsim/scenario.hpp"

namespace mecsim {

/// Published heterogeneous traffic intensities (rho_1..rho_4).
std::vector<double> appendix_rho_per_class();

/// The 3-group, 20h-channel, 4-class reference system under scaling `h`,
/// with u_j = lambda_j / rho_j and bar-eps_j = 20.1 rho_j / lambda_j.
/// Throws ValidationError for h < 1 or non-positive intensities.
NetworkConfig appendix_network(int h, const std::vector<double>& rho_per_class);

/// Full scenario (network, all five policies with default parameters,
/// default experiment controls) for a uniform or per-class intensity.
ScenarioSpec generate_appendix_scenario(int h, double rho);
ScenarioSpec generate_appendix_scenario(int h, const std::vector<double>& rho_per_class);

}  // namespace mecsim
