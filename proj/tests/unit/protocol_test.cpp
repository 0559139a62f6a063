#include "kschan/protocol.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "kschan/info_metrics.hpp"
#include "kschan/ks_model.hpp"
#include "oracles.hpp"

namespace kschan {
namespace {

constexpr double kPi = std::numbers::pi;

UnitVec3 at_dot(const UnitVec3& pole, double dot, double phi) {
  return rotate_to_frame(UnitVec3::from_polar(dot, phi), pole);
}

// Exact binned target mass over the z-band [lo, hi], by quadrature.
double exact_band_mass(double lo, double hi) {
  lo = std::max(lo, 0.0);
  hi = std::max(hi, 0.0);
  return hi > lo ? oracle::integrate([](double z) { return 2.0 * z; }, lo, hi) : 0.0;
}

TEST(Codebook, BitIdenticalForBothParties) {
  Rng rng(1);
  for (int k = 0; k < 10000; ++k) {
    const std::uint64_t seed = rng();
    const std::uint64_t i = 1 + rng() % 1'000'000;
    const Codebook alice(seed);
    const Codebook bob(seed);
    ASSERT_EQ(alice.entry(i), bob.entry(i));
  }
  EXPECT_FALSE(Codebook(1).entry(1) == Codebook(2).entry(1));
  EXPECT_FALSE(Codebook(1).entry(1) == Codebook(1).entry(2));
}

TEST(Codebook, EntriesUniformOnSphere) {
  constexpr int kN = 200'000;
  const Codebook book(42);
  std::vector<double> z(kN);
  for (int i = 0; i < kN; ++i) z[i] = book.entry(i + 1).z();
  EXPECT_LT(oracle::ks_statistic(z, [](double t) { return 0.5 * (t + 1.0); }),
            oracle::ks_critical_1pct(kN));
}

TEST(DiscretizeKs, MassesAndValidation) {
  for (std::size_t k : {2u, 4u, 16u, 256u, 4096u}) {
    const KsDiscretization d = discretize_ks(k);
    double st = 0.0, sp = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      st += d.target()[b];
      sp += d.proposal()[b];
    }
    EXPECT_NEAR(st, 1.0, 1e-12);
    EXPECT_NEAR(sp, 1.0, 1e-12);
  }
  const KsDiscretization two = discretize_ks(2);
  EXPECT_EQ(two.target()[0], 0.0);
  EXPECT_EQ(two.target()[1], 1.0);
  EXPECT_EQ(two.proposal()[0], 0.5);
  EXPECT_EQ(two.proposal()[1], 0.5);
  EXPECT_THROW(discretize_ks(0), std::invalid_argument);
  EXPECT_THROW(discretize_ks(7), std::invalid_argument);
}

TEST(DiscretizeKs, BinMassesMatchQuadratureAndApproximationBound) {
  for (std::size_t k : {16u, 256u, 4096u}) {
    const KsDiscretization d = discretize_ks(k);
    const double width = 2.0 / static_cast<double>(k);
    double tv = 0.0;
    for (std::size_t b = 0; b < k; ++b) {
      const double lo = -1.0 + width * static_cast<double>(b);
      const double hi = lo + width;
      ASSERT_NEAR(d.target()[b], exact_band_mass(lo, hi), 1e-14);
      // Half the L1 gap between the exact density 2z and its bin average.
      const double level = d.target()[b] / width;
      tv += 0.5 * oracle::integrate(
                      [&](double z) { return std::abs((z > 0.0 ? 2.0 * z : 0.0) - level); },
                      lo, hi);
    }
    EXPECT_LE(tv, 1.0 / static_cast<double>(k)) << k;
  }
}

TEST(ZBinner, BoundaryAtZeroForEvenBins) {
  const ZBinner binner(UnitVec3::unit_z(), 8);
  EXPECT_EQ(binner.bin_of_height(-1.0), 0u);
  EXPECT_EQ(binner.bin_of_height(1.0), 7u);
  EXPECT_EQ(binner.bin_of_height(0.0), 4u);
  EXPECT_EQ(binner.bin_of_height(-1e-12), 3u);
}

TEST(RoundOneAcceptance, SevenSixteenths) {
  // Unbinned: integral over the sphere of min(rho(x), rho(x | v)).
  const auto overlap = [](double z) { return std::min(0.25 / kPi, z / kPi); };
  const double unbinned =
      2.0 * kPi * (oracle::integrate(overlap, 0.0, 0.25) + oracle::integrate(overlap, 0.25, 1.0));
  EXPECT_NEAR(unbinned, 7.0 / 16.0, 1e-12);

  for (std::size_t k : {8u, 64u, 4096u}) {
    const KsDiscretization d = discretize_ks(k);
    SamplerLedger ledger(d.plan());
    ledger.advance(0);
    EXPECT_NEAR(ledger.total_accepted(), 7.0 / 16.0, 1e-12) << k;
  }
}

TEST(AliceBob, DeterministicMessages) {
  const KsDiscretization disc(kDefaultBins);
  const UnitVec3 v = UnitVec3::normalized(1.0, -2.0, 0.5);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng c1(seed + 1000), c2(seed + 1000);
    const AliceMessage a = alice_send(v, Codebook(seed), disc, c1);
    const AliceMessage b = alice_send(v, Codebook(seed), disc, c2);
    ASSERT_EQ(a.bits, b.bits);
    ASSERT_EQ(a.bits, elias_delta_encode(a.index));
    ASSERT_EQ(a.bin, disc.binner(v)(Codebook(seed).entry(a.index)));
  }
}

TEST(AliceBob, MalformedMessageIsRejected) {
  const Codebook book(3);
  EXPECT_THROW(bob_receive(BitString::from_string("001"), book, Measurement{UnitVec3::unit_z()}),
               DecodeError);
}

TEST(AliceBob, TwoBinsReduceToFairCoinCase) {
  const KsDiscretization disc(2);
  constexpr int kTrials = 100'000;
  const UnitVec3 v = UnitVec3::unit_y();
  double sum = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    sum += static_cast<double>(run_trial(77, t, v, Measurement{v}, disc).accepted_index);
  }
  EXPECT_NEAR(sum / kTrials, 2.0, 0.02);
}

TEST(EndToEnd, CodeBitsMatchIndexLength) {
  const KsDiscretization disc(kDefaultBins);
  Rng rng(5);
  for (int t = 0; t < 2000; ++t) {
    const UnitVec3 v = random_unit_vec(rng);
    const TrialReport r = run_trial(5, t, v, Measurement{random_unit_vec(rng)}, disc);
    ASSERT_EQ(r.code_bits, elias_delta_length(r.accepted_index));
  }
}

double plus_fraction(const KsDiscretization& disc, const UnitVec3& v, const UnitVec3& m,
                     int trials, std::uint64_t seed) {
  int plus = 0;
  for (int t = 0; t < trials; ++t) {
    plus += run_trial(seed, t, v, Measurement{m}, disc).outcome == Outcome::kPlus ? 1 : 0;
  }
  return static_cast<double>(plus) / trials;
}

TEST(EndToEnd, OrthogonalAxesGiveFairCoin) {
  const KsDiscretization disc(kDefaultBins);
  const UnitVec3 v = UnitVec3::normalized(0.3, 0.4, 0.5);
  EXPECT_NEAR(plus_fraction(disc, v, at_dot(v, 0.0, 1.0), 100'000, 11), 0.5, 0.005);
}

TEST(EndToEnd, AlignedAxesGiveCertainPlus) {
  const KsDiscretization disc(kDefaultBins);
  const UnitVec3 v = UnitVec3::normalized(-0.3, 0.4, 0.5);
  EXPECT_GE(plus_fraction(disc, v, v, 100'000, 12), 0.996);
}

TEST(EndToEnd, BornRuleOnDotGrid) {
  const KsDiscretization disc(kDefaultBins);
  const UnitVec3 v = UnitVec3::normalized(0.7, 0.1, -0.2);
  for (double dot : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    const UnitVec3 m = at_dot(v, dot, 2.2);
    EXPECT_NEAR(plus_fraction(disc, v, m, 50'000, 13), 0.5 * (1.0 + dot), 0.01) << dot;
  }
}

TEST(EndToEnd, SmallBinCountLeakageMatchesExactBinnedLaw) {
  // With K bins Bob's height is uniform inside the accepted bin, so for v = m
  // P(+) is exactly 1 (bins never straddle z = 0) and the mean height is
  // sum_b target(b) * centre(b).
  const KsDiscretization disc(8);
  const UnitVec3 v = UnitVec3::unit_x();
  EXPECT_EQ(plus_fraction(disc, v, v, 20'000, 14), 1.0);

  double expected_height = 0.0;
  for (std::size_t b = 0; b < 8; ++b) {
    expected_height += disc.target()[b] * (-1.0 + (2.0 * b + 1.0) / 8.0);
  }
  constexpr int kTrials = 100'000;
  double sum = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    const Codebook book(trial_seed(15, t, TrialStream::kCodebook));
    Rng coins(trial_seed(15, t, TrialStream::kAlice));
    sum += v.dot(bob_ontic_state(alice_send(v, book, disc, coins).bits, book));
  }
  EXPECT_NEAR(sum / kTrials, expected_height, 0.004);
}

TEST(EndToEnd, AzimuthUniformWithinAcceptedBin) {
  const KsDiscretization disc(8);
  const UnitVec3 v = UnitVec3::normalized(0.2, -0.9, 0.3);
  // Any orthonormal frame around v will do; the statistic is shift invariant.
  const Eigen::Vector3d e1 = v.vec().unitOrthogonal();
  const Eigen::Vector3d e2 = v.vec().cross(e1);
  std::vector<std::vector<double>> by_bin(8);
  constexpr int kTrials = 100'000;
  for (int t = 0; t < kTrials; ++t) {
    const Codebook book(trial_seed(16, t, TrialStream::kCodebook));
    Rng coins(trial_seed(16, t, TrialStream::kAlice));
    const AliceMessage msg = alice_send(v, book, disc, coins);
    const UnitVec3 x = bob_ontic_state(msg.bits, book);
    const double phi = std::atan2(x.vec().dot(e2), x.vec().dot(e1));
    by_bin[msg.bin].push_back(phi / (2.0 * kPi) + (phi < 0.0 ? 1.0 : 0.0));
  }
  for (std::size_t b = 0; b < 4; ++b) EXPECT_TRUE(by_bin[b].empty());
  for (std::size_t b = 4; b < 8; ++b) {
    ASSERT_GT(by_bin[b].size(), 1000u);
    EXPECT_LT(oracle::kuiper_statistic(by_bin[b]), oracle::kuiper_critical_1pct(by_bin[b].size()))
        << "bin " << b;
  }
}

TEST(EndToEnd, CostSandwich) {
  const KsDiscretization disc(kDefaultBins);
  constexpr int kTrials = 100'000;
  Rng rng(17);
  double sum = 0.0, sum_sq = 0.0, at_one = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    const TrialReport r =
        run_trial(17, t, random_unit_vec(rng), Measurement{UnitVec3::unit_z()}, disc);
    sum += r.code_bits;
    sum_sq += static_cast<double>(r.code_bits) * r.code_bits;
    at_one += r.accepted_index == 1 ? 1.0 : 0.0;
  }
  const double mean = sum / kTrials;
  const double sigma = std::sqrt((sum_sq / kTrials - mean * mean) / (kTrials - 1));
  const double im = exact_ks_mi();
  const double upper = im + 2.0 * std::log2(im + 1.0) + 2.0 * std::numbers::log2e;
  EXPECT_NEAR(upper, 6.54, 0.001);
  EXPECT_GE(mean, im - 3.0 * sigma);
  EXPECT_LE(mean, upper + 3.0 * sigma);
  EXPECT_NEAR(at_one / kTrials, 0.4375, 0.005);
}

}  // namespace
}  // namespace kschan
