#include <benchmark/benchmark.h>

#include <cstdint>
#include <memory>

#include "mastlab/audit.hpp"
#include "mastlab/cascade.hpp"
#include "mastlab/cladogram.hpp"
#include "mastlab/excursion.hpp"
#include "mastlab/mast.hpp"
#include "mastlab/rng.hpp"

namespace {

using namespace mastlab;

void BM_Mast(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  const auto a = sample_uniform(n, rng);
  const auto b = sample_uniform(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mast(a, b).size);
  state.counters["cells"] = benchmark::Counter(
      mast_cost_estimate(static_cast<std::size_t>(n)), benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Mast)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_SampleUniform(benchmark::State& state) {
  Rng rng(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_uniform(static_cast<int>(state.range(0)), rng));
  }
}
BENCHMARK(BM_SampleUniform)->Arg(1024);

void BM_RangeMinQuery(benchmark::State& state) {
  Rng rng(3);
  const auto e = sample_excursion(static_cast<std::size_t>(state.range(0)), rng);
  const std::size_t n = e.grid();
  for (auto _ : state) {
    const auto s = rng.below(n), t = rng.below(n);
    benchmark::DoNotOptimize(e.distance(s, t));
  }
}
BENCHMARK(BM_RangeMinQuery)->Arg(1 << 14)->Arg(1 << 20);

void BM_SampleExcursion(benchmark::State& state) {
  Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_excursion(static_cast<std::size_t>(state.range(0)), rng));
  }
}
BENCHMARK(BM_SampleExcursion)->Arg(1 << 14)->Unit(benchmark::kMicrosecond);

void BM_BuildCascade(benchmark::State& state) {
  Rng rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_cascade(static_cast<std::size_t>(state.range(0)), rng));
  }
}
BENCHMARK(BM_BuildCascade)->DenseRange(6, 10, 2)->Unit(benchmark::kMillisecond);

void BM_SqrtProductSums(benchmark::State& state) {
  Rng rng(6);
  const auto k = static_cast<std::size_t>(state.range(0));
  auto a = std::make_shared<MassCascade>(build_cascade(k, rng));
  auto b = std::make_shared<MassCascade>(build_cascade(k, rng));
  const Correspondence corr(a, b);
  for (auto _ : state) benchmark::DoNotOptimize(sqrt_product_sums(corr, k));
}
BENCHMARK(BM_SqrtProductSums)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_HashedCascadePath(benchmark::State& state) {
  HashedCascade c(7);
  Rng rng(8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_size_biased_path(c, 50, rng));
  }
}
BENCHMARK(BM_HashedCascadePath);

}  // namespace

BENCHMARK_MAIN();
