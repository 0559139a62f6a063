#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>

#include "kschan/bloch.hpp"
#include "kschan/elias_delta.hpp"
#include "kschan/greedy_sampler.hpp"

namespace kschan {

// Shared randomness between sender and receiver: an unbounded list of points
// drawn uniformly from the sphere. Entry i is a pure function of (seed, i),
// so both parties can evaluate it independently in O(1).
class Codebook {
 public:
  explicit Codebook(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  // i >= 1.
  UnitVec3 entry(std::uint64_t i) const;

 private:
  std::uint64_t seed_;
};

// K equal-width bins of z in [-1, 1].
class ZBinner {
 public:
  ZBinner(const UnitVec3& pole, std::size_t bins) : pole_(pole), bins_(bins) {}

  std::size_t bin_of_height(double z) const;
  // Bin of z = pole . x.
  std::size_t operator()(const UnitVec3& x) const { return bin_of_height(pole_.dot(x)); }

  const UnitVec3& pole() const noexcept { return pole_; }
  std::size_t bins() const noexcept { return bins_; }

 private:
  UnitVec3 pole_;
  std::size_t bins_;
};

// The Kochen-Specker conditional law reduced to the height z = v.x, binned
// into K equal bins. Target bin mass is the integral of 2z over the positive
// part of the bin; proposal bin mass is 1/K, the law of z for a uniform point.
// Neither depends on v, so one instance serves every trial with the same K.
class KsDiscretization {
 public:
  // Throws std::invalid_argument unless bins >= 2 and even.
  explicit KsDiscretization(std::size_t bins);

  std::size_t bins() const noexcept { return bins_; }
  const GreedyPlan& plan() const noexcept { return *plan_; }
  const DiscreteDistribution& target() const noexcept { return plan_->target(); }
  const DiscreteDistribution& proposal() const noexcept { return plan_->proposal(); }
  ZBinner binner(const UnitVec3& v) const { return ZBinner(v, bins_); }

 private:
  std::size_t bins_;
  std::shared_ptr<const GreedyPlan> plan_;
};

inline KsDiscretization discretize_ks(std::size_t bins) { return KsDiscretization(bins); }

inline constexpr std::size_t kDefaultBins = 4096;

struct AliceMessage {
  BitString bits;              // Elias delta codeword of `index`
  std::uint64_t index = 0;     // accepted codebook position k >= 1
  std::size_t bin = 0;         // z-bin of the accepted entry
};

// Sender: streams codebook entries, bins them by height along v, runs the
// greedy sampler against the binned KS law and encodes the accepted index.
AliceMessage alice_send(const UnitVec3& v, const Codebook& codebook,
                        const KsDiscretization& disc, Rng& coins,
                        std::uint64_t cap = kDefaultRoundCap);

// Receiver: decodes k and returns codebook entry k, the simulated ontic state.
UnitVec3 bob_ontic_state(const BitString& bits, const Codebook& codebook);

// Receiver: hemisphere response of the decoded ontic state.
Outcome bob_receive(const BitString& bits, const Codebook& codebook,
                    const Measurement& meas);

struct TrialReport {
  UnitVec3 state;
  Measurement meas;
  std::uint64_t accepted_index = 0;
  unsigned code_bits = 0;
  Outcome outcome = Outcome::kPlus;
};

// Independent random streams of one trial.
enum class TrialStream : std::uint64_t { kCodebook = 0, kAlice = 1, kSetup = 2 };

constexpr std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial,
                                   TrialStream stream) noexcept {
  return derive_seed(derive_seed(master, trial), static_cast<std::uint64_t>(stream));
}

// One prepare-transmit-measure round with a fresh codebook. Pure function of
// its arguments.
TrialReport run_trial(std::uint64_t master_seed, std::uint64_t trial_index,
                      const UnitVec3& v, const Measurement& meas,
                      const KsDiscretization& disc);

}  // namespace kschan
