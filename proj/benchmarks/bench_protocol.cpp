#include <benchmark/benchmark.h>

#include "kschan/protocol.hpp"

namespace {

void BM_Discretize(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(kschan::discretize_ks(static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_Discretize)->Arg(64)->Arg(4096);

void BM_RunTrial(benchmark::State& state) {
  const kschan::KsDiscretization disc(static_cast<std::size_t>(state.range(0)));
  const kschan::UnitVec3 v = kschan::UnitVec3::normalized(0.3, -0.2, 0.9);
  const kschan::Measurement m{kschan::UnitVec3::unit_x()};
  std::uint64_t trial = 0;
  for (auto _ : state) benchmark::DoNotOptimize(kschan::run_trial(5, trial++, v, m, disc));
}
BENCHMARK(BM_RunTrial)->Arg(64)->Arg(4096);

}  // namespace
