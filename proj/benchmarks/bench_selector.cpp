#include <benchmark/benchmark.h>

#include "evos/rng.hpp"
#include "evos/selector.hpp"

namespace {

using namespace evos;

FitnessCache randomCache(int n) {
  SplitMix64 rng(3);
  FitnessCache cache;
  cache.lowFitness.resize(n);
  cache.highFitness.resize(n);
  for (int i = 0; i < n; ++i) {
    cache.lowFitness(i) = rng.nextDouble();
    cache.highFitness(i) = rng.nextDouble();
  }
  cache.lowAggregate = cache.lowFitness.mean();
  cache.highAggregate = cache.highFitness.mean();
  cache.lastKeyIteration = 1;
  return cache;
}

void BM_TopK(benchmark::State& state) {
  const int n = 65536;
  const auto cache = randomCache(n);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(topKIndices(cache.lowFitness, k));
}
BENCHMARK(BM_TopK)->Arg(21845)->Arg(32768)->Unit(benchmark::kMicrosecond);

void BM_CrossoverMutate(benchmark::State& state) {
  const int n = 65536;
  const auto cache = randomCache(n);
  const int k = 21845;
  const auto [low, high] = selectSurvivors(cache, k);
  SplitMix64 rng(9);
  for (auto _ : state) {
    IndexVec w = crossover(low, high, cache, k, rng);
    benchmark::DoNotOptimize(mutate(w, n, 0.5, k, rng));
  }
}
BENCHMARK(BM_CrossoverMutate)->Unit(benchmark::kMicrosecond);

}  // namespace
