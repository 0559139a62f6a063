#pragma once

#include "kschan/bloch.hpp"

namespace kschan {

// A hidden-variable description of single-qubit preparations and
// measurements. Densities are with respect to a reference measure chosen by
// the model (solid angle for continuous models, counting measure for
// discrete toy models); conditional and marginal must use the same one.
class OntologicalModel {
 public:
  virtual ~OntologicalModel() = default;

  // Draw from the prior over preparations. Uniform on the Bloch sphere unless
  // a model says otherwise.
  virtual UnitVec3 sample_state(Rng& rng) const { return random_unit_vec(rng); }

  // rho(x | psi).
  virtual double conditional_density(const UnitVec3& x,
                                     const UnitVec3& state) const = 0;
  // x ~ rho(. | psi).
  virtual UnitVec3 sample_ontic(const UnitVec3& state, Rng& rng) const = 0;
  // P(outcome | x, M).
  virtual double response_probability(const UnitVec3& x, const Measurement& meas,
                                      Outcome outcome) const = 0;
  // rho(x) = integral of rho(x | psi) over the prior.
  virtual double marginal_density(const UnitVec3& x) const = 0;
};

// rho(x | v) = max(v.x, 0) / pi, per steradian.
double ks_density(const UnitVec3& x, const UnitVec3& v);

// Exact sampler for ks_density: polar cosine z = sqrt(u) with u ~ U(0, 1],
// uniform azimuth, rotated so the pole is v.
UnitVec3 ks_sample(const UnitVec3& v, Rng& rng);

// Deterministic hemisphere response: "+" iff x.m >= 0.
Outcome ks_response(const UnitVec3& x, const Measurement& meas);

// rho(x) for a uniform prior on v; constant 1 / (4 pi).
double ks_marginal(const UnitVec3& x);

// Kochen-Specker model for a qubit.
class KsModel final : public OntologicalModel {
 public:
  double conditional_density(const UnitVec3& x, const UnitVec3& state) const override {
    return ks_density(x, state);
  }
  UnitVec3 sample_ontic(const UnitVec3& state, Rng& rng) const override {
    return ks_sample(state, rng);
  }
  double response_probability(const UnitVec3& x, const Measurement& meas,
                              Outcome outcome) const override {
    return ks_response(x, meas) == outcome ? 1.0 : 0.0;
  }
  double marginal_density(const UnitVec3& x) const override { return ks_marginal(x); }
};

// Integral of response * density over the sphere, i.e. the probability the
// model assigns to `outcome` for preparation `state`. Requires a model whose
// conditional density is supported on the hemisphere about `state` and whose
// response is a hemisphere indicator about the measurement axis (KS); the
// polar range is split at the heights where these two boundaries meet.
double model_outcome_probability(const OntologicalModel& model,
                                 const UnitVec3& state, const Measurement& meas,
                                 Outcome outcome = Outcome::kPlus);

// Integral of conditional_density(. | state) over the sphere.
double model_normalization(const OntologicalModel& model, const UnitVec3& state);

}  // namespace kschan
