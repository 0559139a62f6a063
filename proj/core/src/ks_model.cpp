#include "kschan/ks_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "kschan/quadrature.hpp"

namespace kschan {

double ks_density(const UnitVec3& x, const UnitVec3& v) {
  const double c = v.dot(x);
  return c > 0.0 ? c * std::numbers::inv_pi : 0.0;
}

UnitVec3 ks_sample(const UnitVec3& v, Rng& rng) {
  const double u = 1.0 - uniform01(rng);  // (0, 1]
  const double z = std::sqrt(u);
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  return rotate_to_frame(UnitVec3::from_polar(z, phi), v);
}

Outcome ks_response(const UnitVec3& x, const Measurement& meas) {
  return x.dot(meas.direction) >= 0.0 ? Outcome::kPlus : Outcome::kMinus;
}

double ks_marginal(const UnitVec3& /*x*/) {
  return 0.25 * std::numbers::inv_pi;
}

double model_outcome_probability(const OntologicalModel& model,
                                 const UnitVec3& state, const Measurement& meas,
                                 Outcome outcome) {
  // Only the hemisphere z = state.x > 0 carries mass. The response boundary
  // x.m = 0 stops crossing rings above z = sin(beta), beta = angle(state, m).
  const double c = std::clamp(state.dot(meas.direction), -1.0, 1.0);
  const double kink = std::sqrt((1.0 - c) * (1.0 + c));
  std::vector<double> breaks{0.0, 1.0};
  if (kink > 0.0 && kink < 1.0) breaks.insert(breaks.begin() + 1, kink);
  return quadrature::integrate_sphere_indicator(
      [&](const UnitVec3& x) { return model.conditional_density(x, state); },
      [&](const UnitVec3& x) {
        return model.response_probability(x, meas, outcome) > 0.5;
      },
      state, breaks);
}

double model_normalization(const OntologicalModel& model, const UnitVec3& state) {
  const std::vector<double> breaks{-1.0, 0.0, 1.0};
  return quadrature::integrate_sphere(
      [&](const UnitVec3& x) { return model.conditional_density(x, state); }, state,
      breaks);
}

}  // namespace kschan
