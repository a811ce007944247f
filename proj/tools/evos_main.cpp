#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "evos/config.hpp"
#include "evos/report.hpp"
#include "evos/synth.hpp"

namespace {

using namespace evos;

struct CommonOpts {
  std::string configPath;
  std::vector<std::string> overrides;
};

void addCommon(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.configPath, "flat key=value config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("set", opts.overrides, "key=value overrides applied after the config file");
}

void printSnapshot(const RunRecord& record) {
  if (const QualitySnapshot* s = record.lastSnapshot()) {
    std::printf("final: t=%d psnr=%.3f dB", s->iteration, s->psnr);
    if (!std::isnan(s->ssim)) std::printf(" ssim=%.4f", s->ssim);
    std::printf(" mse=%.3e\n", s->mse);
  }
  std::printf("training time: %.2f s (selection %.1f ms, cache refresh %.1f ms, %d refreshes)\n",
              record.phases.trainingSeconds(), record.phases.selectMs, record.phases.refreshMs,
              record.phases.refreshCount);
}

int cmdFit(const CommonOpts& opts) {
  ExperimentConfig config = buildConfig(opts.configPath, opts.overrides);
  const RunRecord record = runExperiment(config);
  printSnapshot(record);
  if (!record.runCsvPath.empty()) std::printf("artifacts: %s\n", config.outputDir.c_str());
  if (record.aborted) {
    std::fprintf(stderr, "run aborted: %s\n", record.abortReason.c_str());
    return 1;
  }
  return 0;
}

ExperimentConfig strategyVariant(const ExperimentConfig& base, const std::string& token) {
  ExperimentConfig c = base;
  if (token == "standard") c.strategy = Strategy::Standard;
  else if (token == "uniform") c.strategy = Strategy::Uniform;
  else if (token == "evos") c.strategy = Strategy::Evos;
  else if (token == "evos_nocfs") {
    c.strategy = Strategy::Evos;
    c.loss.lambdaHigh = 0.0;
  } else {
    throw CLI::ValidationError("--strategies", "unknown strategy '" + token + "'");
  }
  return c;
}

int cmdCompare(const CommonOpts& opts, const std::vector<std::string>& strategies,
               const std::vector<std::uint64_t>& seeds, std::vector<int> checkpoints) {
  ExperimentConfig base = buildConfig(opts.configPath, opts.overrides);
  std::vector<std::pair<std::string, ExperimentConfig>> runs;
  for (const auto& token : strategies)
    for (std::uint64_t seed : seeds.empty() ? std::vector<std::uint64_t>{base.seed} : seeds) {
      ExperimentConfig c = strategyVariant(base, token);
      c.seed = seed;
      c.outputDir.clear();  // comparison rows only; per-run artifacts via `fit`
      runs.emplace_back(token, c);
    }
  if (checkpoints.empty()) checkpoints = {1000, 2000, 5000};
  const ComparisonTable table = runComparison(runs, checkpoints);

  std::string outDir = base.outputDir.empty() ? "." : base.outputDir;
  std::filesystem::create_directories(outDir);
  const auto comparePath = (std::filesystem::path(outDir) / "compare.csv").string();
  const auto targetPath = (std::filesystem::path(outDir) / "time_to_target.csv").string();
  writeComparisonCsv(comparePath, table);
  writeTimeToTargetCsv(targetPath, table);
  std::printf("wrote %s and %s\n", comparePath.c_str(), targetPath.c_str());

  for (const auto& row : table.rows) {
    std::printf("%-12s seed=%llu", row.label.c_str(), static_cast<unsigned long long>(row.seed));
    for (std::size_t i = 0; i < table.checkpoints.size(); ++i)
      std::printf("  psnr@%d=%.2f", table.checkpoints[i], row.psnrAt[i]);
    std::printf("  time=%.1fs%s\n", row.totalSeconds, row.aborted ? " [aborted]" : "");
  }
  return 0;
}

int cmdAblate(const CommonOpts& opts, std::vector<int> checkpoints) {
  ExperimentConfig base = buildConfig(opts.configPath, opts.overrides);
  const std::string outDir = base.outputDir.empty() ? "." : base.outputDir;
  base.strategy = Strategy::Evos;
  base.outputDir.clear();
  if (checkpoints.empty()) checkpoints = {1000, base.totalIterations};
  const ComparisonTable table = runComparison(ablationGrid(base), checkpoints);
  std::filesystem::create_directories(outDir);
  const auto path = (std::filesystem::path(outDir) / "ablation.csv").string();
  writeComparisonCsv(path, table);
  std::printf("wrote %s\n", path.c_str());
  for (const auto& row : table.rows) {
    std::printf("%-10s", row.label.c_str());
    for (std::size_t i = 0; i < table.checkpoints.size(); ++i)
      std::printf("  psnr@%d=%.2f", table.checkpoints[i], row.psnrAt[i]);
    std::printf("  time=%.1fs%s\n", row.totalSeconds, row.aborted ? " [aborted]" : "");
  }
  return 0;
}

int cmdEval(const CommonOpts& opts, const std::string& checkpointPath,
            const std::string& reconstructionOut) {
  ExperimentConfig config = buildConfig(opts.configPath, opts.overrides);
  const Signal signal = loadSignal(config.source);
  const MlpModel<float> model = loadCheckpoint(checkpointPath);
  if (model.config.inputDim != signal.coordDim() ||
      model.config.outputDim != signal.channelCount())
    throw std::runtime_error("eval: checkpoint dimensions do not match the signal");

  const MatrixX<float> pred = forward<float>(model, signal.coords);
  const double mseValue = meanSquaredError(pred, signal.attrs);
  std::printf("mse=%.6e psnr=%.3f dB", mseValue, psnrFromMse(mseValue));
  if (signal.grid.rank == 2 && signal.grid.extents[0] >= 11 && signal.grid.extents[1] >= 11) {
    std::printf(" ssim=%.4f", ssim(FieldBuffer<float>{signal.grid, pred},
                                   FieldBuffer<float>{signal.grid, signal.attrs}));
  }
  std::printf("\n");
  if (!reconstructionOut.empty()) {
    if (signal.grid.rank == 2)
      writePng(reconstructionOut, imageFromAttrs(signal.grid, pred));
    else
      writeWav(reconstructionOut,
               audioFromAttrs(signal.grid, pred, config.source.audioSampleRate));
    std::printf("wrote %s\n", reconstructionOut.c_str());
  }
  return 0;
}

int cmdSynth(const std::string& imageOut, const std::string& audioOut, int size, double seconds,
             int rate) {
  if (imageOut.empty() && audioOut.empty())
    throw CLI::ValidationError("synth", "need --image and/or --audio output path");
  if (!imageOut.empty()) {
    writePng(imageOut, makeTestCardImage(size, size));
    std::printf("wrote %s (%dx%d grayscale)\n", imageOut.c_str(), size, size);
  }
  if (!audioOut.empty()) {
    writeWav(audioOut, makeSineMixClip(seconds, rate));
    std::printf("wrote %s (%.1f s @ %d Hz)\n", audioOut.c_str(), seconds, rate);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evos: coordinate-MLP signal fitting with evolutionary coordinate selection"};
  app.require_subcommand(1);

  CommonOpts fitOpts, compareOpts, ablateOpts, evalOpts;

  CLI::App* fit = app.add_subcommand("fit", "train one experiment");
  addCommon(fit, fitOpts);

  CLI::App* compare = app.add_subcommand("compare", "run a strategy matrix on one signal");
  addCommon(compare, compareOpts);
  std::vector<std::string> strategies{"standard", "uniform", "evos", "evos_nocfs"};
  std::vector<std::uint64_t> seeds;
  std::vector<int> compareCheckpoints;
  compare->add_option("--strategies", strategies,
                      "strategies: standard uniform evos evos_nocfs")->delimiter(',');
  compare->add_option("--seeds", seeds, "seeds, one run per strategy each")->delimiter(',');
  compare->add_option("--checkpoints", compareCheckpoints, "snapshot iterations")->delimiter(',');

  CLI::App* ablate = app.add_subcommand("ablate", "run the component-ablation grid");
  addCommon(ablate, ablateOpts);
  std::vector<int> ablateCheckpoints;
  ablate->add_option("--checkpoints", ablateCheckpoints, "snapshot iterations")->delimiter(',');

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint against a signal");
  addCommon(eval, evalOpts);
  std::string checkpointPath, reconstructionOut;
  eval->add_option("--checkpoint", checkpointPath, "model checkpoint")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--reconstruction", reconstructionOut, "write the reconstruction here");

  CLI::App* synth = app.add_subcommand("synth", "generate deterministic demo signals");
  std::string synthImage, synthAudio;
  int synthSize = 256, synthRate = 8000;
  double synthSeconds = 2.0;
  synth->add_option("--image", synthImage, "output PNG path");
  synth->add_option("--audio", synthAudio, "output WAV path");
  synth->add_option("--size", synthSize, "test-card side length")->check(CLI::PositiveNumber);
  synth->add_option("--seconds", synthSeconds, "clip length")->check(CLI::PositiveNumber);
  synth->add_option("--rate", synthRate, "sample rate")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) return cmdFit(fitOpts);
    if (compare->parsed()) return cmdCompare(compareOpts, strategies, seeds, compareCheckpoints);
    if (ablate->parsed()) return cmdAblate(ablateOpts, ablateCheckpoints);
    if (eval->parsed()) return cmdEval(evalOpts, checkpointPath, reconstructionOut);
    if (synth->parsed()) return cmdSynth(synthImage, synthAudio, synthSize, synthSeconds, synthRate);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
