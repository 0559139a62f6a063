#pragma once

#include <cstdint>
#include <random>

namespace kschan {

// Every stochastic routine takes its stream explicitly. mt19937_64 has a
// bit-exact output sequence mandated by the standard.
using Rng = std::mt19937_64;

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Seed of the sub-stream `stream` of `master`. Distinct (master, stream)
// pairs give statistically independent seeds.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t stream) noexcept {
  return mix64(master + kGoldenGamma * (mix64(stream) | 1ULL));
}

// 53 high bits mapped to [0, 1).
constexpr double bits_to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform in [0, 1). Spelled out instead of std::uniform_real_distribution so
// the mapping is identical across standard library implementations.
inline double uniform01(Rng& rng) { return bits_to_unit(rng()); }

}  // namespace kschan
