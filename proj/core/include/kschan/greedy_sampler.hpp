#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "kschan/random.hpp"

namespace kschan {

// Probability vector over the alphabet {0, ..., size()-1}.
class DiscreteDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  // Throws std::invalid_argument on an empty vector, a negative or
  // non-finite mass, or a total differing from 1 by more than 1e-12.
  explicit DiscreteDistribution(std::vector<double> masses);
  static DiscreteDistribution uniform(std::size_t size);

  std::size_t size() const noexcept { return masses_.size(); }
  double operator[](std::size_t a) const { return masses_[a]; }
  std::span<const double> masses() const noexcept { return masses_; }

  // Inverse-CDF draw.
  std::size_t sample(Rng& rng) const;

 private:
  std::vector<double> masses_;
  std::vector<double> cdf_;
};

class ProtocolFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Target/proposal pair prepared for greedy rejection sampling.
//
// After i - 1 rounds the accepted mass of symbol a is
//   s_i(a) = min(target(a), proposal(a) * L_i),  L_i = sum_{j<i} (1 - S_j),
// which is the closed form of the round update
//   s'(a) = s(a) + min((1 - S) proposal(a), target(a) - s(a)).
// Sorting symbols by target/proposal makes S(L) a prefix/suffix-sum lookup.
class GreedyPlan {
 public:
  // Throws std::invalid_argument if the alphabets differ or some symbol has
  // target mass but zero proposal mass.
  GreedyPlan(DiscreteDistribution target, DiscreteDistribution proposal);

  const DiscreteDistribution& target() const noexcept { return target_; }
  const DiscreteDistribution& proposal() const noexcept { return proposal_; }
  std::size_t size() const noexcept { return target_.size(); }

  // target(a) / proposal(a); 0 where proposal(a) == 0.
  double ratio(std::size_t a) const { return ratio_[a]; }
  double max_ratio() const noexcept { return sorted_ratio_.back(); }

 private:
  friend class SamplerLedger;

  DiscreteDistribution target_;
  DiscreteDistribution proposal_;
  std::vector<double> ratio_;
  std::vector<double> sorted_ratio_;     // ascending
  std::vector<double> suffix_target_;    // [k] = sum over sorted positions >= k
  std::vector<double> suffix_proposal_;  // same for the proposal
};

// Accepted-mass bookkeeping of one run of the greedy sampler.
class SamplerLedger {
 public:
  explicit SamplerLedger(const GreedyPlan& plan);

  // Index i >= 1 of the round about to be played.
  std::uint64_t step() const noexcept { return step_; }
  // S = sum_a s(a).
  double total_accepted() const noexcept { return 1.0 - remaining_; }
  // 1 - S, computed without cancellation.
  double remaining() const noexcept { return remaining_; }
  double accepted_mass(std::size_t a) const;
  std::vector<double> accepted_masses() const;

  // Probability of accepting symbol `a` if it is drawn at the current round,
  // (s'(a) - s(a)) / ((1 - S) proposal(a)).
  double acceptance_probability(std::size_t a) const;

  // Plays the current round with drawn symbol `a`: returns
  // acceptance_probability(a) and advances the ledger to the next round. Throws ProtocolFailure if no mass remains.
  double advance(std::size_t a);

 private:
  double remaining_at(std::size_t cursor) const;

  const GreedyPlan* plan_;
  double level_ = 0.0;      // L_i
  std::size_t cursor_ = 0;  // first sorted position with ratio > level_
  double remaining_ = 1.0;
  std::uint64_t step_ = 1;
};

struct GreedyResult {
  std::uint64_t index = 0;  // round of acceptance, >= 1
  std::size_t symbol = 0;
};

inline constexpr std::uint64_t kDefaultRoundCap = std::uint64_t{1} << 32;

// One-shot greedy rejection sampling. `stream(i)` returns the i-th shared
// proposal symbol (i = 1, 2, ...), i.i.d. from plan.proposal(); `coins` is
// the sender's private randomness. The returned symbol is distributed exactly
// as plan.target(). Throws ProtocolFailure after `cap` rounds.
template <class SymbolStream>
GreedyResult greedy_one_shot(const GreedyPlan& plan, SymbolStream&& stream,
                             Rng& coins, std::uint64_t cap = kDefaultRoundCap) {
  SamplerLedger ledger(plan);
  for (std::uint64_t i = 1; i <= cap; ++i) {
    const std::size_t a = stream(i);
    if (a >= plan.size()) throw std::out_of_range("greedy_one_shot: symbol outside alphabet");
    const double accept = ledger.advance(a);
    if (uniform01(coins) < accept) return {i, a};
  }
  throw ProtocolFailure("greedy_one_shot: round cap reached without acceptance");
}

template <class SymbolStream>
GreedyResult greedy_one_shot(const DiscreteDistribution& target,
                             const DiscreteDistribution& proposal,
                             SymbolStream&& stream, Rng& coins,
                             std::uint64_t cap = kDefaultRoundCap) {
  const GreedyPlan plan(target, proposal);
  return greedy_one_shot(plan, stream, coins, cap);
}

}  // namespace kschan
