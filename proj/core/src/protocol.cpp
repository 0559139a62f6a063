#include "kschan/protocol.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kschan/ks_model.hpp"

namespace kschan {

UnitVec3 Codebook::entry(std::uint64_t i) const {
  const double u = bits_to_unit(derive_seed(seed_, 2 * i));
  const double w = bits_to_unit(derive_seed(seed_, 2 * i + 1));
  return UnitVec3::from_polar(1.0 - 2.0 * u, 2.0 * std::numbers::pi * w);
}

std::size_t ZBinner::bin_of_height(double z) const {
  const double scaled = (z + 1.0) * 0.5 * static_cast<double>(bins_);
  if (!(scaled > 0.0)) return 0;
  return std::min(static_cast<std::size_t>(scaled), bins_ - 1);
}

namespace {

GreedyPlan make_ks_plan(std::size_t bins) {
  std::vector<double> target(bins);
  const double k = static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double lo = std::max(-1.0 + 2.0 * static_cast<double>(b) / k, 0.0);
    const double hi = std::max(-1.0 + 2.0 * static_cast<double>(b + 1) / k, 0.0);
    target[b] = (hi - lo) * (hi + lo);
  }
  return GreedyPlan(DiscreteDistribution(std::move(target)),
                    DiscreteDistribution::uniform(bins));
}

}  // namespace

KsDiscretization::KsDiscretization(std::size_t bins) : bins_(bins) {
  if (bins < 2 || bins % 2 != 0) {
    throw std::invalid_argument("KsDiscretization: bins must be even and >= 2");
  }
  plan_ = std::make_shared<const GreedyPlan>(make_ks_plan(bins));
}

AliceMessage alice_send(const UnitVec3& v, const Codebook& codebook,
                        const KsDiscretization& disc, Rng& coins, std::uint64_t cap) {
  const ZBinner binner = disc.binner(v);
  const GreedyResult r = greedy_one_shot(
      disc.plan(), [&](std::uint64_t i) { return binner(codebook.entry(i)); }, coins, cap);
  return {elias_delta_encode(r.index), r.index, r.symbol};
}

UnitVec3 bob_ontic_state(const BitString& bits, const Codebook& codebook) {
  return codebook.entry(elias_delta_decode(bits));
}

Outcome bob_receive(const BitString& bits, const Codebook& codebook,
                    const Measurement& meas) {
  return ks_response(bob_ontic_state(bits, codebook), meas);
}

TrialReport run_trial(std::uint64_t master_seed, std::uint64_t trial_index,
                      const UnitVec3& v, const Measurement& meas,
                      const KsDiscretization& disc) {
  const Codebook codebook(trial_seed(master_seed, trial_index, TrialStream::kCodebook));
  Rng coins(trial_seed(master_seed, trial_index, TrialStream::kAlice));
  const AliceMessage msg = alice_send(v, codebook, disc, coins);
  const Outcome outcome = bob_receive(msg.bits, codebook, meas);
  return {v, meas, msg.index, static_cast<unsigned>(msg.bits.size()), outcome};
}

}  // namespace kschan
