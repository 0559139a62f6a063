#include "kschan/greedy_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kschan {

DiscreteDistribution::DiscreteDistribution(std::vector<double> masses)
    : masses_(std::move(masses)) {
  if (masses_.empty()) {
    throw std::invalid_argument("DiscreteDistribution: empty alphabet");
  }
  double total = 0.0;
  cdf_.reserve(masses_.size());
  for (double m : masses_) {
    if (!std::isfinite(m) || m < 0.0) {
      throw std::invalid_argument("DiscreteDistribution: masses must be finite and >= 0");
    }
    total += m;
    cdf_.push_back(total);
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw std::invalid_argument("DiscreteDistribution: masses do not sum to 1");
  }
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t size) {
  if (size == 0) throw std::invalid_argument("DiscreteDistribution: empty alphabet");
  return DiscreteDistribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

std::size_t DiscreteDistribution::sample(Rng& rng) const {
  const double u = uniform01(rng) * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  auto a = static_cast<std::size_t>(it - cdf_.begin());
  if (a >= masses_.size()) a = masses_.size() - 1;
  // Skip zero-mass symbols that share a cdf value with their successor.
  while (masses_[a] == 0.0 && a + 1 < masses_.size()) ++a;
  return a;
}

GreedyPlan::GreedyPlan(DiscreteDistribution target, DiscreteDistribution proposal)
    : target_(std::move(target)), proposal_(std::move(proposal)) {
  const std::size_t n = target_.size();
  if (proposal_.size() != n) {
    throw std::invalid_argument("GreedyPlan: target and proposal alphabets differ");
  }
  ratio_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (proposal_[a] == 0.0) {
      if (target_[a] != 0.0) {
        throw std::invalid_argument(
            "GreedyPlan: target puts mass where the proposal has none");
      }
      ratio_[a] = 0.0;
    } else {
      ratio_[a] = target_[a] / proposal_[a];
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ratio_[a] < ratio_[b]; });
  sorted_ratio_.resize(n);
  suffix_target_.assign(n + 1, 0.0);
  suffix_proposal_.assign(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    sorted_ratio_[k] = ratio_[order[k]];
    suffix_target_[k] = suffix_target_[k + 1] + target_[order[k]];
    suffix_proposal_[k] = suffix_proposal_[k + 1] + proposal_[order[k]];
  }
}

SamplerLedger::SamplerLedger(const GreedyPlan& plan) : plan_(&plan) {
  while (cursor_ < plan_->sorted_ratio_.size() && plan_->sorted_ratio_[cursor_] <= 0.0) {
    ++cursor_;
  }
  remaining_ = remaining_at(cursor_);
}

double SamplerLedger::remaining_at(std::size_t cursor) const {
  // 1 - S(L) = sum over symbols with ratio > L of (target - proposal * L).
  const double r = plan_->suffix_target_[cursor] - level_ * plan_->suffix_proposal_[cursor];
  return std::max(r, 0.0);
}

double SamplerLedger::accepted_mass(std::size_t a) const {
  return std::min(plan_->target_[a], plan_->proposal_[a] * level_);
}

std::vector<double> SamplerLedger::accepted_masses() const {
  std::vector<double> s(plan_->size());
  for (std::size_t a = 0; a < s.size(); ++a) s[a] = accepted_mass(a);
  return s;
}

double SamplerLedger::acceptance_probability(std::size_t a) const {
  const double rest = remaining_;
  if (!(rest > 0.0)) return 0.0;
  const double r = plan_->ratio_[a];
  return std::clamp((std::min(r, level_ + rest) - std::min(r, level_)) / rest, 0.0, 1.0);
}

double SamplerLedger::advance(std::size_t a) {
  if (!(remaining_ > 0.0)) {
    throw ProtocolFailure("greedy sampler: no unaccepted mass left in the ledger");
  }
  const double accept = acceptance_probability(a);
  level_ += remaining_;
  const auto& sorted = plan_->sorted_ratio_;
  while (cursor_ < sorted.size() && sorted[cursor_] <= level_) ++cursor_;
  remaining_ = remaining_at(cursor_);
  ++step_;
  return accept;
}

}  // namespace kschan
