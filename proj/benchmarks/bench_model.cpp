#include <benchmark/benchmark.h>

#include "kschan/info_metrics.hpp"
#include "kschan/ks_model.hpp"

namespace {

void BM_KsSample(benchmark::State& state) {
  kschan::Rng rng(1);
  const kschan::UnitVec3 v = kschan::UnitVec3::normalized(1.0, 2.0, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(kschan::ks_sample(v, rng));
}
BENCHMARK(BM_KsSample);

void BM_MiShard(benchmark::State& state) {
  const kschan::KsModel model;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kschan::mc_mutual_information(model, kschan::kMiShardSize, seed++, 1));
  }
  state.SetItemsProcessed(state.iterations() * kschan::kMiShardSize);
}
BENCHMARK(BM_MiShard)->Unit(benchmark::kMillisecond);

}  // namespace
