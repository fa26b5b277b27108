#pragma once

#include <string>
#include <string_view>

#include "mecsim/rng.hpp"

namespace mecsim {

enum class LifespanFamily { kExponential, kDeterministic, kParetoFiniteVar, kParetoInfiniteVar };

inline constexpr double kParetoFiniteShape = 2.001;
inline constexpr double kParetoInfiniteShape = 1.98;

/// Task lifespan law with a prescribed mean 1/u.
struct LifespanModel {
  LifespanFamily family = LifespanFamily::kExponential;
  double mean = 1.0;

  double shape() const;  // Pareto shape, 0 for the other families
  /// Pareto scale x_m = mean (a - 1) / a, so the Pareto mean equals `mean`.
  double pareto_scale() const;
};

/// Inverse-transform sample from a uniform draw `u` in [0, 1).
double lifespan_quantile(const LifespanModel& model, double u);
double sample_lifespan(const LifespanModel& model, Rng& rng);

/// CLI spelling: exp, det, pareto-f, pareto-inf.
LifespanFamily parse_lifespan_family(std::string_view name);
std::string lifespan_family_name(LifespanFamily family);

}  // namespace mecsim
