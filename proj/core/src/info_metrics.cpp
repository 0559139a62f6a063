#include "kschan/info_metrics.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kschan/parallel.hpp"
#include "kschan/quadrature.hpp"

namespace kschan {
namespace {

constexpr std::array<double, 3> kHemispheres{-1.0, 0.0, 1.0};

// Running mean and sum of squared deviations; merged with Chan's formula.
struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
  }
};

}  // namespace

double exact_ks_mi() { return 2.0 - 0.5 / std::numbers::ln2; }

double conditional_entropy_ks() {
  return quadrature::integrate_segment(
      [](double z) { return z > 0.0 ? -2.0 * z * std::log2(z * std::numbers::inv_pi) : 0.0; },
      0.0, 1.0);
}

double marginal_entropy_ks() { return std::log2(4.0 * std::numbers::pi); }

double conditional_entropy(const OntologicalModel& model, const UnitVec3& state) {
  return quadrature::integrate_sphere(
      [&](const UnitVec3& x) {
        const double rho = model.conditional_density(x, state);
        return rho > 0.0 ? -rho * std::log2(rho) : 0.0;
      },
      state, kHemispheres);
}

double kl_divergence(const OntologicalModel& model, const UnitVec3& state) {
  return quadrature::integrate_sphere(
      [&](const UnitVec3& x) {
        const double rho = model.conditional_density(x, state);
        return rho > 0.0 ? rho * std::log2(rho / model.marginal_density(x)) : 0.0;
      },
      state, kHemispheres);
}

double kl_divergence_ks(const UnitVec3& v) { return kl_divergence(KsModel{}, v); }

MiEstimate mc_mutual_information(const OntologicalModel& model, std::uint64_t n,
                                 std::uint64_t seed, unsigned workers) {
  if (n < 1000) {
    throw std::invalid_argument("mc_mutual_information: need at least 1000 samples");
  }
  const std::uint64_t shards = (n + kMiShardSize - 1) / kMiShardSize;
  std::vector<Moments> partial(shards);

  for_each_shard(shards, workers, [&](std::size_t s) {
    Rng rng(derive_seed(seed, s));
    const std::uint64_t begin = s * kMiShardSize;
    const std::uint64_t end = std::min<std::uint64_t>(n, begin + kMiShardSize);
    Moments m;
    for (std::uint64_t j = begin; j < end; ++j) {
      const UnitVec3 psi = model.sample_state(rng);
      const UnitVec3 x = model.sample_ontic(psi, rng);
      const double marginal = model.marginal_density(x);
      if (!(marginal > 0.0)) {
        throw std::domain_error("mc_mutual_information: zero marginal density at a sample");
      }
      m.add(std::log2(model.conditional_density(x, psi) / marginal));
    }
    partial[s] = m;
  });

  Moments total;
  for (const Moments& m : partial) total.merge(m);
  const double variance = total.m2 / static_cast<double>(total.n - 1);
  return {total.mean, std::sqrt(variance / static_cast<double>(total.n)), total.n};
}

}  // namespace kschan
