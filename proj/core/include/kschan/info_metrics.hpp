#pragma once

#include <cstdint>

#include "kschan/ks_model.hpp"

namespace kschan {

// Monte Carlo estimate of a mutual information, in bits.
struct MiEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
};

// I(X:Psi) for the Kochen-Specker model: 2 - 1/(2 ln 2) bits.
double exact_ks_mi();

// Differential entropy of rho(x | v) in bits, -2 int_0^1 z log2(z/pi) dz,
// evaluated by one-dimensional quadrature. Independent of v.
double conditional_entropy_ks();

// Differential entropy of the uniform marginal, log2(4 pi) bits.
double marginal_entropy_ks();

// D(rho(. | v) || rho(.)) in bits by quadrature over the sphere around v.
double kl_divergence_ks(const UnitVec3& v);

// Generic sphere-quadrature versions for models whose conditional density is
// smooth on each hemisphere about the state.
double conditional_entropy(const OntologicalModel& model, const UnitVec3& state);
double kl_divergence(const OntologicalModel& model, const UnitVec3& state);

inline constexpr std::uint64_t kMiShardSize = 1u << 16;

// Mean of log2[rho(x_j | psi_j) / rho(x_j)] over psi_j from the model prior
// and x_j ~ rho(. | psi_j). Samples are split into fixed shards of
// kMiShardSize with seeds derived from `seed`, so the estimate does not depend
// on `workers`. Throws std::invalid_argument if n < 1000 and
// std::domain_error if a sampled point has zero marginal density.
MiEstimate mc_mutual_information(const OntologicalModel& model, std::uint64_t n,
                                 std::uint64_t seed, unsigned workers = 1);

}  // namespace kschan
