#include "mecsim/lifespan.hpp"

#include <cmath>
#include <stdexcept>

namespace mecsim {

double LifespanModel::shape() const {
  switch (family) {
    case LifespanFamily::kParetoFiniteVar:
      return kParetoFiniteShape;
    case LifespanFamily::kParetoInfiniteVar:
      return kParetoInfiniteShape;
    default:
      return 0.0;
  }
}

double LifespanModel::pareto_scale() const {
  const double a = shape();
  return mean * (a - 1.0) / a;
}

double lifespan_quantile(const LifespanModel& model, double u) {
  if (!(model.mean > 0.0)) throw std::invalid_argument("lifespan mean must be positive");
  switch (model.family) {
    case LifespanFamily::kExponential:
      return -model.mean * std::log1p(-u);
    case LifespanFamily::kDeterministic:
      return model.mean;
    case LifespanFamily::kParetoFiniteVar:
    case LifespanFamily::kParetoInfiniteVar:
      return model.pareto_scale() * std::pow(1.0 - u, -1.0 / model.shape());
  }
  throw std::logic_error("unknown lifespan family");
}

double sample_lifespan(const LifespanModel& model, Rng& rng) { return lifespan_quantile(model, uniform01(rng)); }

LifespanFamily parse_lifespan_family(std::string_view name) {
  if (name == "exp") return LifespanFamily::kExponential;
  if (name == "det") return LifespanFamily::kDeterministic;
  if (name == "pareto-f") return LifespanFamily::kParetoFiniteVar;
  if (name == "pareto-inf") return LifespanFamily::kParetoInfiniteVar;
  throw std::invalid_argument("unknown lifespan family '" + std::string(name) + "'");
}

std::string lifespan_family_name(LifespanFamily family) {
  switch (family) {
    case LifespanFamily::kExponential:
      return "exp";
    case LifespanFamily::kDeterministic:
      return "det";
    case LifespanFamily::kParetoFiniteVar:
      return "pareto-f";
    case LifespanFamily::kParetoInfiniteVar:
      return "pareto-inf";
  }
  return "exp";
}

}  // namespace mecsim
