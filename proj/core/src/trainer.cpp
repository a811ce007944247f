#include "evos/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "evos/report.hpp"

namespace evos {
namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Largest k with k + round(alpha*k) <= n, starting from the nominal
// survivor count (the rounding slack can overshoot N by one when the
// schedule ramps to the full grid).
int clampSurvivorCount(int k, double alpha, int n) {
  while (k > 1 && k + roundHalfUp(alpha * k) > n) --k;
  return k;
}

}  // namespace

std::string strategyName(Strategy s) {
  switch (s) {
    case Strategy::Standard: return "standard";
    case Strategy::Uniform: return "uniform";
    case Strategy::Evos: return "evos";
  }
  return "unknown";
}

Signal loadSignal(const SignalSource& source) {
  const bool image = !source.imagePath.empty();
  const bool audio = !source.audioPath.empty();
  if (image == audio)
    throw std::invalid_argument("signal source: exactly one of image/audio must be set");
  if (image) return loadImage(source.imagePath, source.cropSize);
  return loadAudio(source.audioPath, source.audioSeconds, source.audioSampleRate);
}

void ExperimentConfig::validate() const {
  mlp.validate();
  selector.validate();
  schedule.validate();
  loss.validate();
  if (totalIterations < 1) throw std::invalid_argument("ExperimentConfig: iters must be >= 1");
  if (evalEvery < 1) throw std::invalid_argument("ExperimentConfig: eval_every must be >= 1");
  if (stopAfter < 0) throw std::invalid_argument("ExperimentConfig: stop_after must be >= 0");
  if (optimizer.learningRate <= 0) throw std::invalid_argument("ExperimentConfig: lr must be > 0");
  if (threads < 0) throw std::invalid_argument("ExperimentConfig: threads must be >= 0");
}

const QualitySnapshot* RunRecord::snapshotAt(int t) const {
  for (const auto& s : snapshots)
    if (s.iteration == t) return &s;
  return nullptr;
}

const QualitySnapshot* RunRecord::lastSnapshot() const {
  return snapshots.empty() ? nullptr : &snapshots.back();
}

TrainingRun::TrainingRun(const ExperimentConfig& config, Signal signal)
    : config_(config), signal_(std::move(signal)), sampleRng_(0) {
  // One iteration count and one Laplacian operator for every component.
  config_.selector.totalIterations = config_.totalIterations;
  config_.schedule.totalIterations = config_.totalIterations;
  config_.loss.kernel = config_.selector.kernel;
  config_.loss.padding = config_.selector.padding;
  // Model dimensions follow the signal.
  config_.mlp.inputDim = signal_.coordDim();
  config_.mlp.outputDim = signal_.channelCount();
  // seed initializes the model directly; all sampling streams share one
  // derived value so strategy comparisons see the same model.
  const std::uint64_t sampleSeed = SplitMix64(config_.seed).nextUint64();
  config_.selector.rngSeed = sampleSeed;
  sampleRng_ = SplitMix64(sampleSeed);
  config_.validate();
  if (config_.threads > 0) Eigen::setNbThreads(config_.threads);

  model_ = initModel<float>(config_.mlp, config_.seed);
  adam_ = makeAdamState<float>(model_, static_cast<float>(config_.optimizer.learningRate),
                               static_cast<float>(config_.optimizer.beta1),
                               static_cast<float>(config_.optimizer.beta2),
                               static_cast<float>(config_.optimizer.epsilon));
  if (config_.strategy == Strategy::Evos) selector_.emplace(config_.selector);
  truthField_ = FieldBuffer<float>{signal_.grid, signal_.attrs};
  if (config_.strategy == Strategy::Evos && config_.loss.lambdaHigh > 0.0)
    truthLaplacian_ = laplacian(truthField_, config_.loss.kernel, config_.loss.padding);

  record_.crossings.reserve(config_.psnrTargets.size());
  for (double target : config_.psnrTargets) record_.crossings.push_back({target, -1, -1.0});
  std::sort(config_.extraEvalIterations.begin(), config_.extraEvalIterations.end());

  warmup();
}

TrainingRun::~TrainingRun() = default;

void TrainingRun::warmup() {
  // Dry run on copies: exercises the allocator and GEMM thread pool
  // before any timed phase.
  const auto start = Clock::now();
  MlpModel<float> model = model_;
  AdamState<float> adam = adam_;
  ForwardTrace<float> trace;
  const MatrixX<float> pred = forward<float>(model, signal_.coords, &trace);
  MatrixX<float> gradOut = (pred - signal_.attrs) * (2.0f / static_cast<float>(pred.size()));
  adamStep(model, adam, backward<float>(model, trace, gradOut));
  record_.phases.warmupMs = msSince(start);
}

bool TrainingRun::step() {
  const int last = config_.lastIteration();
  if (record_.aborted || t_ >= last) return false;
  const int t = ++t_;

  if (config_.optimizer.cosineLrDecay) {
    adam_.learningRate = static_cast<float>(
        config_.optimizer.learningRate * 0.5 *
        (1.0 + std::cos(M_PI * static_cast<double>(t - 1) / config_.totalIterations)));
  }

  IterationRow row;
  row.t = t;
  try {
    switch (config_.strategy) {
      case Strategy::Standard: stepStandard(row); break;
      case Strategy::Uniform: stepUniform(row); break;
      case Strategy::Evos: stepEvos(row); break;
    }
  } catch (const std::runtime_error& e) {
    record_.aborted = true;
    record_.abortReason = "iteration " + std::to_string(t) + ": " + e.what();
    return false;
  }

  row.elapsedS = record_.phases.trainingSeconds();
  record_.rows.push_back(row);

  if (!std::isfinite(row.lossTotal)) {
    record_.aborted = true;
    record_.abortReason = "iteration " + std::to_string(t) + ": non-finite loss";
    return false;
  }

  const bool forced = std::binary_search(config_.extraEvalIterations.begin(),
                                         config_.extraEvalIterations.end(), t);
  if (t % config_.evalEvery == 0 || t == last || forced) evaluate(t);
  return t_ < last;
}

void TrainingRun::runToEnd() {
  while (step()) {
  }
}

void TrainingRun::evaluate(int t) {
  const auto start = Clock::now();
  lastEvalPredictions_ = forward<float>(model_, signal_.coords, nullptr, &evalScratch_);
  QualitySnapshot snap;
  snap.iteration = t;
  snap.elapsedSeconds = record_.phases.trainingSeconds();
  snap.mse = meanSquaredError(lastEvalPredictions_, signal_.attrs);
  snap.psnr = psnrFromMse(snap.mse);
  const bool ssimable = signal_.grid.rank == 2 && signal_.grid.extents[0] >= 11 &&
                        signal_.grid.extents[1] >= 11;
  snap.ssim = ssimable
                  ? ssim(FieldBuffer<float>{signal_.grid, lastEvalPredictions_}, truthField_)
                  : std::nan("");
  record_.snapshots.push_back(snap);
  for (auto& crossing : record_.crossings)
    if (crossing.iteration < 0 && snap.psnr >= crossing.targetDb) {
      crossing.iteration = t;
      crossing.elapsedS = snap.elapsedSeconds;
    }
  if (!record_.rows.empty() && record_.rows.back().t == t) {
    record_.rows.back().psnr = snap.psnr;
    record_.rows.back().ssim = snap.ssim;
  }
  record_.phases.evalMs += msSince(start);
}

void TrainingRun::stepStandard(IterationRow& row) {
  const int n = signal_.coordCount();
  row.q = n;
  row.k = n;

  auto start = Clock::now();
  predZ_ = forward<float>(model_, signal_.coords, &trace_);
  row.fwdMs = msSince(start);
  record_.phases.forwardMs += row.fwdMs;

  start = Clock::now();
  gradZ_ = predZ_ - signal_.attrs;
  const double mse =
      static_cast<double>(gradZ_.cast<double>().squaredNorm()) / static_cast<double>(gradZ_.size());
  gradZ_ *= 2.0f / static_cast<float>(gradZ_.size());
  const Gradients<float> grads = backward<float>(model_, trace_, gradZ_, &bwdScratch_);
  row.bwdMs = msSince(start);
  record_.phases.backwardMs += row.bwdMs;

  start = Clock::now();
  adamStep(model_, adam_, grads);
  row.optMs = msSince(start);
  record_.phases.optimizerMs += row.optMs;

  row.lossTotal = row.lossLow = mse;
  row.lossHigh = 0.0;
}

void TrainingRun::stepUniform(IterationRow& row) {
  const int n = signal_.coordCount();

  auto start = Clock::now();
  const int q = selectionSize(config_.schedule, row.t, n);
  const IndexVec z = sampleRange(n, q, sampleRng_);
  row.selectMs = msSince(start);
  record_.phases.selectMs += row.selectMs;
  row.q = q;
  row.k = q;

  start = Clock::now();
  coordsZ_ = signal_.coords(z, Eigen::all);
  predZ_ = forward<float>(model_, coordsZ_, &trace_);
  row.fwdMs = msSince(start);
  record_.phases.forwardMs += row.fwdMs;

  start = Clock::now();
  gradZ_ = predZ_ - signal_.attrs(z, Eigen::all);
  const double mse =
      static_cast<double>(gradZ_.cast<double>().squaredNorm()) / static_cast<double>(gradZ_.size());
  gradZ_ *= 2.0f / static_cast<float>(gradZ_.size());
  const Gradients<float> grads = backward<float>(model_, trace_, gradZ_, &bwdScratch_);
  row.bwdMs = msSince(start);
  record_.phases.backwardMs += row.bwdMs;

  start = Clock::now();
  adamStep(model_, adam_, grads);
  row.optMs = msSince(start);
  record_.phases.optimizerMs += row.optMs;

  row.lossTotal = row.lossLow = mse;
  row.lossHigh = 0.0;
}

void TrainingRun::stepEvos(IterationRow& row) {
  const int n = signal_.coordCount();

  auto start = Clock::now();
  const int q = selectionSize(config_.schedule, row.t, n);
  int k = config_.selector.useMutation ? survivorCount(q, config_.selector.alpha) : q;
  if (config_.selector.useMutation) k = clampSurvivorCount(k, config_.selector.alpha, n);
  SelectPhaseTimes times;
  const SelectorState& state = selector_->selectSubset(model_, signal_, row.t, k, &times);
  row.selectMs = msSince(start) - times.refreshMs;
  record_.phases.selectMs += row.selectMs;
  record_.phases.refreshMs += times.refreshMs;
  record_.phases.refreshCount += times.refreshed;
  row.q = q;
  row.k = k;
  row.gammaFlag = gamma(row.t, config_.selector);

  start = Clock::now();
  coordsZ_ = signal_.coords(state.selected, Eigen::all);
  predZ_ = forward<float>(model_, coordsZ_, &trace_);
  row.fwdMs = msSince(start);
  record_.phases.forwardMs += row.fwdMs;

  start = Clock::now();
  const LossReport report = crossFrequencyLoss<float>(
      predZ_, state.selected, &selector_->cache().predictions, truthField_, config_.loss,
      &gradZ_, truthLaplacian_ ? &*truthLaplacian_ : nullptr);
  const Gradients<float> grads = backward<float>(model_, trace_, gradZ_, &bwdScratch_);
  row.bwdMs = msSince(start);
  record_.phases.backwardMs += row.bwdMs;

  start = Clock::now();
  adamStep(model_, adam_, grads);
  row.optMs = msSince(start);
  record_.phases.optimizerMs += row.optMs;

  row.lossTotal = report.total;
  row.lossLow = report.low;
  row.lossHigh = report.high;
}

RunRecord runExperiment(const ExperimentConfig& config, Signal signal) {
  TrainingRun run(config, std::move(signal));
  run.runToEnd();
  RunRecord record = run.record();
  if (!config.outputDir.empty()) writeRunArtifacts(run, record);
  return record;
}

RunRecord runExperiment(const ExperimentConfig& config) {
  return runExperiment(config, loadSignal(config.source));
}

ComparisonTable compareStrategies(const std::vector<ExperimentConfig>& configs,
                                  std::vector<int> checkpoints) {
  std::vector<std::pair<std::string, ExperimentConfig>> labeled;
  labeled.reserve(configs.size());
  for (const auto& c : configs) labeled.emplace_back(strategyName(c.strategy), c);
  return runComparison(labeled, std::move(checkpoints));
}

ComparisonTable runComparison(const std::vector<std::pair<std::string, ExperimentConfig>>& runs,
                              std::vector<int> checkpoints) {
  if (runs.empty()) throw std::invalid_argument("compareStrategies: empty config list");
  const SignalSource& source = runs.front().second.source;
  const Backbone backbone = runs.front().second.mlp.backbone;
  for (const auto& [label, c] : runs) {
    if (!(c.source == source))
      throw std::invalid_argument("compareStrategies: mismatched signals (" + label + ")");
    if (c.mlp.backbone != backbone)
      throw std::invalid_argument("compareStrategies: mismatched backbones (" + label + ")");
  }
  const Signal signal = loadSignal(source);

  ComparisonTable table;
  for (int cp : checkpoints)
    if (cp >= 1 && cp <= runs.front().second.totalIterations) table.checkpoints.push_back(cp);
  std::sort(table.checkpoints.begin(), table.checkpoints.end());
  table.checkpoints.erase(std::unique(table.checkpoints.begin(), table.checkpoints.end()),
                          table.checkpoints.end());
  table.targets = runs.front().second.psnrTargets;

  for (const auto& [label, base] : runs) {
    ExperimentConfig c = base;
    c.extraEvalIterations.insert(c.extraEvalIterations.end(), table.checkpoints.begin(),
                                 table.checkpoints.end());
    const RunRecord record = runExperiment(c, signal);

    ComparisonRow row;
    row.label = label;
    row.seed = c.seed;
    row.totalSeconds = record.phases.trainingSeconds();
    row.crossings = record.crossings;
    row.aborted = record.aborted;
    for (int cp : table.checkpoints) {
      const QualitySnapshot* snap = record.snapshotAt(cp);
      row.psnrAt.push_back(snap ? snap->psnr : std::nan(""));
      row.ssimAt.push_back(snap ? snap->ssim : std::nan(""));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<std::pair<std::string, ExperimentConfig>> ablationGrid(const ExperimentConfig& base) {
  if (base.strategy != Strategy::Evos)
    throw std::invalid_argument("ablationGrid: base strategy must be evos");
  std::vector<std::pair<std::string, ExperimentConfig>> grid;
  const auto variant = [&base](auto mutate) {
    ExperimentConfig c = base;
    mutate(c);
    return c;
  };
  grid.emplace_back("evos", base);
  grid.emplace_back("wo_eval", variant([](ExperimentConfig& c) { c.selector.useFitnessEval = false; }));
  grid.emplace_back("theta_0", variant([](ExperimentConfig& c) { c.selector.theta = 0.0; }));
  grid.emplace_back("tau_1", variant([](ExperimentConfig& c) { c.selector.tau = 1.0; }));
  grid.emplace_back("tau_10", variant([](ExperimentConfig& c) { c.selector.tau = 10.0; }));
  grid.emplace_back("wo_cross", variant([](ExperimentConfig& c) { c.selector.useCrossover = false; }));
  grid.emplace_back("wo_cfs", variant([](ExperimentConfig& c) { c.loss.lambdaHigh = 0.0; }));
  grid.emplace_back("wo_mutat", variant([](ExperimentConfig& c) { c.selector.useMutation = false; }));
  grid.emplace_back("alpha_0.1", variant([](ExperimentConfig& c) { c.selector.alpha = 0.1; }));
  grid.emplace_back("alpha_1.0", variant([](ExperimentConfig& c) { c.selector.alpha = 1.0; }));
  return grid;
}

}  // namespace evos
