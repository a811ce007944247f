#include <benchmark/benchmark.h>

#include "evos/field.hpp"
#include "evos/rng.hpp"

namespace {

using namespace evos;

FieldBuffer<float> randomField(int rows, int cols) {
  SplitMix64 rng(11);
  FieldBuffer<float> f{makeGrid2d(rows, cols, 1), MatrixX<float>(rows * cols, 1)};
  for (int i = 0; i < f.values.rows(); ++i) f.values(i, 0) = static_cast<float>(rng.nextDouble());
  return f;
}

void BM_Laplacian256(benchmark::State& state) {
  const auto field = randomField(256, 256);
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(field));
}
BENCHMARK(BM_Laplacian256)->Unit(benchmark::kMicrosecond);

void BM_LaplacianAdjoint256(benchmark::State& state) {
  const auto field = randomField(256, 256);
  for (auto _ : state) benchmark::DoNotOptimize(laplacianAdjoint(field));
}
BENCHMARK(BM_LaplacianAdjoint256)->Unit(benchmark::kMicrosecond);

void BM_HighFreqResidual256(benchmark::State& state) {
  const auto pred = randomField(256, 256);
  const auto truth = randomField(256, 256);
  for (auto _ : state) benchmark::DoNotOptimize(highFreqResidual(pred, truth));
}
BENCHMARK(BM_HighFreqResidual256)->Unit(benchmark::kMicrosecond);

}  // namespace
