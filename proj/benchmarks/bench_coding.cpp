#include <benchmark/benchmark.h>

#include "kschan/elias_delta.hpp"

namespace {

void BM_EliasEncode(benchmark::State& state) {
  std::uint64_t i = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kschan::elias_delta_encode(i));
    i = i * 6364136223846793005ULL % 1'000'000'007ULL + 1;
  }
}
BENCHMARK(BM_EliasEncode);

void BM_EliasRoundTrip(benchmark::State& state) {
  const auto value = static_cast<std::uint64_t>(state.range(0));
  const kschan::BitString bits = kschan::elias_delta_encode(value);
  for (auto _ : state) benchmark::DoNotOptimize(kschan::elias_delta_decode(bits));
}
BENCHMARK(BM_EliasRoundTrip)->Arg(1)->Arg(1000)->Arg(1'000'000'000);

}  // namespace
