#pragma once

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evos/loss.hpp"
#include "evos/metrics.hpp"
#include "evos/mlp.hpp"
#include "evos/schedule.hpp"
#include "evos/selector.hpp"
#include "evos/signal.hpp"

namespace evos {

enum class Strategy { Standard, Uniform, Evos };

std::string strategyName(Strategy s);

struct OptimizerConfig {
  double learningRate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool cosineLrDecay = false;
};

struct SignalSource {
  std::string imagePath;
  std::string audioPath;
  int cropSize = 0;           // center crop (images), 0 = none
  double audioSeconds = 5.0;
  int audioSampleRate = 16000;

  bool configured() const { return !imagePath.empty() || !audioPath.empty(); }
  friend bool operator==(const SignalSource&, const SignalSource&) = default;
};

Signal loadSignal(const SignalSource& source);

struct ExperimentConfig {
  SignalSource source;
  Strategy strategy = Strategy::Evos;
  MlpConfig mlp;
  OptimizerConfig optimizer;
  SelectorConfig selector;
  ScheduleConfig schedule;
  LossConfig loss;
  int totalIterations = 5000;
  int evalEvery = 50;
  int stopAfter = 0;  // stop the loop after this iteration, 0 = run to T
  std::uint64_t seed = 1;
  std::string outputDir;  // empty = no artifacts written
  std::vector<double> psnrTargets{25.0, 30.0, 35.0};
  std::vector<int> extraEvalIterations;  // forced snapshot points (compare checkpoints)
  int threads = 1;  // Eigen GEMM threads (single-threaded measures fastest here)

  void validate() const;
  int lastIteration() const {
    return stopAfter > 0 ? std::min(stopAfter, totalIterations) : totalIterations;
  }
};

struct IterationRow {
  int t = 0;
  double elapsedS = 0.0;  // cumulative training time after this step
  double lossTotal = 0.0, lossLow = 0.0, lossHigh = 0.0;
  double psnr = std::nan(""), ssim = std::nan("");  // NaN when not evaluated
  int q = 0, k = 0, gammaFlag = 0;
  double selectMs = 0.0, fwdMs = 0.0, bwdMs = 0.0, optMs = 0.0;
};

struct PhaseTotals {
  double selectMs = 0.0;
  double refreshMs = 0.0;
  double forwardMs = 0.0;
  double backwardMs = 0.0;
  double optimizerMs = 0.0;
  double evalMs = 0.0;    // excluded from training time
  double warmupMs = 0.0;  // excluded from training time
  int refreshCount = 0;

  double trainingSeconds() const {
    return (selectMs + refreshMs + forwardMs + backwardMs + optimizerMs) / 1000.0;
  }
};

struct TargetCrossing {
  double targetDb = 0.0;
  int iteration = -1;       // -1 = never reached
  double elapsedS = -1.0;
};

struct RunRecord {
  std::vector<IterationRow> rows;
  std::vector<QualitySnapshot> snapshots;
  PhaseTotals phases;
  std::vector<TargetCrossing> crossings;
  std::string checkpointPath, reconstructionPath, runCsvPath;
  bool aborted = false;
  std::string abortReason;

  const QualitySnapshot* snapshotAt(int t) const;
  const QualitySnapshot* lastSnapshot() const;
};

// One experiment: model + optimizer + (optional) selector advancing one
// iteration per step(). Exposed so tests can drive iterations directly.
class TrainingRun {
 public:
  TrainingRun(const ExperimentConfig& config, Signal signal);
  ~TrainingRun();
  TrainingRun(const TrainingRun&) = delete;
  TrainingRun& operator=(const TrainingRun&) = delete;

  // Advance one iteration; false once finished or aborted.
  bool step();
  void runToEnd();

  int iteration() const { return t_; }
  const ExperimentConfig& config() const { return config_; }
  const Signal& signal() const { return signal_; }
  const RunRecord& record() const { return record_; }
  const MlpModel<float>& model() const { return model_; }
  const SelectorRun* selector() const { return selector_ ? &*selector_ : nullptr; }
  const MatrixX<float>& lastEvalPredictions() const { return lastEvalPredictions_; }

 private:
  void warmup();
  void evaluate(int t);
  void stepStandard(IterationRow& row);
  void stepUniform(IterationRow& row);
  void stepEvos(IterationRow& row);

  ExperimentConfig config_;
  Signal signal_;
  MlpModel<float> model_;
  AdamState<float> adam_;
  std::optional<SelectorRun> selector_;
  SplitMix64 sampleRng_;  // uniform-strategy draws
  FieldBuffer<float> truthField_;
  std::optional<FieldBuffer<float>> truthLaplacian_;
  MatrixX<float> lastEvalPredictions_;
  ForwardTrace<float> trace_;
  BackwardScratch<float> bwdScratch_;
  ForwardScratch<float> evalScratch_;
  MatrixX<float> coordsZ_, predZ_, gradZ_;
  RunRecord record_;
  int t_ = 0;
  double elapsedMs_ = 0.0;
};

// Executes the full loop and, when outputDir is set, writes run.csv,
// timing.csv, targets.csv, config.txt, the reconstruction and a binary
// checkpoint. Partial records are flushed when a run aborts.
RunRecord runExperiment(const ExperimentConfig& config, Signal signal);
RunRecord runExperiment(const ExperimentConfig& config);

struct ComparisonRow {
  std::string label;
  std::uint64_t seed = 0;
  std::vector<double> psnrAt, ssimAt;  // aligned with ComparisonTable::checkpoints
  double totalSeconds = 0.0;
  std::vector<TargetCrossing> crossings;
  bool aborted = false;
};

struct ComparisonTable {
  std::vector<int> checkpoints;
  std::vector<double> targets;
  std::vector<ComparisonRow> rows;
};

// Runs each config on the shared signal and aligns quality at the
// checkpoint iterations plus time-to-target. Configs must agree on the
// signal source and backbone.
ComparisonTable compareStrategies(const std::vector<ExperimentConfig>& configs,
                                  std::vector<int> checkpoints = {1000, 2000, 5000});

// Same with explicit row labels (used by the ablation grid).
ComparisonTable runComparison(const std::vector<std::pair<std::string, ExperimentConfig>>& runs,
                              std::vector<int> checkpoints = {1000, 2000, 5000});

// The component-ablation grid: full EVOS, w/o Eval., theta = 0,
// tau = 1, tau = 10, w/o Cross., w/o CFS., w/o Mutat., alpha sweeps.
std::vector<std::pair<std::string, ExperimentConfig>> ablationGrid(const ExperimentConfig& base);

}  // namespace evos
