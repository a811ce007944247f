#include <benchmark/benchmark.h>

#include "evos/mlp.hpp"
#include "evos/signal.hpp"
#include "evos/synth.hpp"

namespace {

using namespace evos;

MlpConfig sirenConfig(int layers, int width) {
  MlpConfig c;
  c.hiddenLayers = layers;
  c.hiddenWidth = width;
  c.inputDim = 2;
  c.outputDim = 1;
  c.backbone = Backbone::Siren;
  return c;
}

void BM_ForwardSiren(benchmark::State& state) {
  const auto signal = signalFromImage(makeTestCardImage(256, 256));
  const auto model = initModel<float>(sirenConfig(2, 128), 7);
  const int batch = static_cast<int>(state.range(0));
  const MatrixX<float> coords = signal.coords.topRows(batch);
  ForwardScratch<float> scratch;
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward<float>(model, coords, nullptr, &scratch));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ForwardSiren)->Arg(8192)->Arg(32768)->Arg(65536)->Unit(benchmark::kMillisecond);

void BM_ForwardBackwardSiren(benchmark::State& state) {
  const auto signal = signalFromImage(makeTestCardImage(256, 256));
  auto model = initModel<float>(sirenConfig(2, 128), 7);
  const int batch = static_cast<int>(state.range(0));
  const MatrixX<float> coords = signal.coords.topRows(batch);
  const MatrixX<float> target = signal.attrs.topRows(batch);
  ForwardTrace<float> trace;
  BackwardScratch<float> scratch;
  for (auto _ : state) {
    const MatrixX<float> pred = forward<float>(model, coords, &trace);
    const MatrixX<float> gradOut = (pred - target) * (2.0f / pred.size());
    benchmark::DoNotOptimize(backward<float>(model, trace, gradOut, &scratch));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_ForwardBackwardSiren)->Arg(8192)->Arg(32768)->Arg(65536)->Unit(benchmark::kMillisecond);

void BM_AdamStep(benchmark::State& state) {
  auto model = initModel<float>(sirenConfig(2, 128), 7);
  auto adam = makeAdamState<float>(model);
  Gradients<float> grads;
  for (const auto& w : model.weights) grads.weights.push_back(w * 0.001f);
  for (const auto& b : model.biases) grads.biases.push_back(b * 0.001f);
  for (auto _ : state) adamStep(model, adam, grads);
}
BENCHMARK(BM_AdamStep);

}  // namespace

BENCHMARK_MAIN();
