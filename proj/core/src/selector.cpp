#include "evos/selector.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace evos {
namespace {

using Clock = std::chrono::steady_clock;

double msSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

void SelectorConfig::validate() const {
  if (tau < 1) throw std::invalid_argument("SelectorConfig: tau must be >= 1");
  if (theta < 0) throw std::invalid_argument("SelectorConfig: theta must be >= 0");
  if (alpha < 0) throw std::invalid_argument("SelectorConfig: alpha must be >= 0");
  if (totalIterations < 1)
    throw std::invalid_argument("SelectorConfig: totalIterations must be >= 1");
}

int gamma(int t, const SelectorConfig& config) {
  config.validate();
  if (t < 1 || t > config.totalIterations) throw std::out_of_range("gamma: t outside [1, T]");
  if (t == 1) return 1;
  const double raw = config.intervalFormula == IntervalFormula::TOverTotal
                         ? config.tau - config.theta * t / config.totalIterations
                         : config.tau - config.theta * t;
  const int interval = std::max(1, roundHalfUp(raw));
  return (t - 1) % interval == 0 ? 1 : 0;
}

void refreshCache(const MlpModel<float>& model, const Signal& signal,
                  const SelectorConfig& config, int t, FitnessCache& cache,
                  ForwardScratch<float>* scratch) {
  const MatrixX<float> predictions = forward<float>(model, signal.coords, nullptr, scratch);
  if (!predictions.allFinite())
    throw std::runtime_error("refreshCache: non-finite predictions at iteration " +
                             std::to_string(t));

  // Double accumulation from the exact float values keeps the fitness
  // vectors reproducible by an independent per-pixel recomputation.
  const MatrixX<double> diff =
      predictions.cast<double>() - signal.attrs.cast<double>();
  cache.lowFitness = diff.array().square().matrix().rowwise().sum();

  const FieldBuffer<double> predField{signal.grid, predictions.cast<double>()};
  const FieldBuffer<double> truthField{signal.grid, signal.attrs.cast<double>()};
  cache.highFitness = highFreqResidual<double>(predField, truthField, config.kernel,
                                               config.padding);

  cache.predictions = predictions;
  cache.lowAggregate = cache.lowFitness.mean();
  cache.highAggregate = cache.highFitness.mean();
  cache.lastKeyIteration = t;
}

std::pair<IndexVec, IndexVec> selectSurvivors(const FitnessCache& cache, int k) {
  if (!cache.populated()) throw std::logic_error("selectSurvivors: fitness cache not populated");
  const int n = static_cast<int>(cache.lowFitness.size());
  if (k < 1 || k > n) throw std::invalid_argument("selectSurvivors: k outside [1, N]");
  return {topKIndices(cache.lowFitness, k), topKIndices(cache.highFitness, k)};
}

IndexVec crossover(const IndexVec& survivorsLow, const IndexVec& survivorsHigh,
                   const FitnessCache& cache, int k, SplitMix64& rng) {
  if (static_cast<int>(survivorsLow.size()) != k || static_cast<int>(survivorsHigh.size()) != k)
    throw std::invalid_argument("crossover: survivor sets must both have size k");

  IndexVec shared, onlyLow, onlyHigh;
  std::set_intersection(survivorsLow.begin(), survivorsLow.end(), survivorsHigh.begin(),
                        survivorsHigh.end(), std::back_inserter(shared));
  std::set_difference(survivorsLow.begin(), survivorsLow.end(), survivorsHigh.begin(),
                      survivorsHigh.end(), std::back_inserter(onlyLow));
  std::set_difference(survivorsHigh.begin(), survivorsHigh.end(), survivorsLow.begin(),
                      survivorsLow.end(), std::back_inserter(onlyHigh));

  const int l = k - static_cast<int>(shared.size());
  const double denom = cache.lowAggregate + cache.highAggregate;
  const double p = denom > 0 ? cache.lowAggregate / denom : 0.5;
  const int fromLow = roundHalfUp(p * l);

  IndexVec result = std::move(shared);
  const IndexVec pickedLow = sampleWithoutReplacement(onlyLow, fromLow, rng);
  const IndexVec pickedHigh = sampleWithoutReplacement(onlyHigh, l - fromLow, rng);
  result.insert(result.end(), pickedLow.begin(), pickedLow.end());
  result.insert(result.end(), pickedHigh.begin(), pickedHigh.end());
  std::sort(result.begin(), result.end());
  return result;
}

IndexVec mutate(const IndexVec& offspring, int coordCount, double alpha, int k, SplitMix64& rng) {
  if (static_cast<int>(offspring.size()) != k)
    throw std::invalid_argument("mutate: offspring size must equal k");
  const int extra = roundHalfUp(alpha * k);
  if (extra > coordCount - k)
    throw std::invalid_argument("mutate: complement too small for round(alpha*k) draws");
  if (extra == 0) return offspring;

  IndexVec complement;
  complement.reserve(coordCount - k);
  // offspring is sorted, so walk both ranges.
  std::size_t o = 0;
  for (int i = 0; i < coordCount; ++i) {
    if (o < offspring.size() && offspring[o] == i) {
      ++o;
      continue;
    }
    complement.push_back(i);
  }
  const IndexVec mutated = sampleWithoutReplacement(complement, extra, rng);
  IndexVec result;
  result.reserve(offspring.size() + mutated.size());
  std::merge(offspring.begin(), offspring.end(), mutated.begin(), mutated.end(),
             std::back_inserter(result));
  return result;
}

SelectorRun::SelectorRun(const SelectorConfig& config)
    : config_(config), rng_(config.rngSeed) {
  config_.validate();
}

const SelectorState& SelectorRun::selectSubset(const MlpModel<float>& model,
                                               const Signal& signal, int t, int k,
                                               SelectPhaseTimes* times) {
  const int n = signal.coordCount();
  if (k < 1 || k > n) throw std::invalid_argument("selectSubset: k outside [1, N]");

  const auto selectStart = Clock::now();
  const int isKey = gamma(t, config_);
  const bool refreshWanted = isKey != 0 && (config_.useFitnessEval || t == 1);
  double refreshMs = 0.0;
  if (refreshWanted) {
    const auto refreshStart = Clock::now();
    refreshCache(model, signal, config_, t, cache_, &forwardScratch_);
    refreshMs = msSince(refreshStart);
    if (times) {
      times->refreshMs += refreshMs;
      times->refreshed += 1;
    }
  }

  state_.iteration = t;
  if (!config_.useFitnessEval) {
    // Unguided selection ("w/o Eval."): uniform draw matching the
    // guided budget, k + round(alpha*k) with mutation, k without.
    const int count = std::min(
        n, config_.useMutation ? k + roundHalfUp(config_.alpha * k) : k);
    state_.survivorsLow.clear();
    state_.survivorsHigh.clear();
    state_.offspring.clear();
    state_.selected = sampleRange(n, count, rng_);
  } else {
    // Survivors and offspring are cache-determined: rebuild only when
    // the cache moved or k changed, so the offspring stays fixed
    // between key iterations and only mutation varies z_t.
    if (refreshWanted || k != offspringK_) {
      auto [low, high] = selectSurvivors(cache_, k);
      state_.survivorsLow = std::move(low);
      if (config_.useCrossover) {
        state_.survivorsHigh = std::move(high);
        state_.offspring = crossover(state_.survivorsLow, state_.survivorsHigh, cache_, k, rng_);
      } else {
        state_.survivorsHigh.clear();
        state_.offspring = state_.survivorsLow;
      }
      offspringK_ = k;
    }
    state_.selected = config_.useMutation
                          ? mutate(state_.offspring, n, config_.alpha, k, rng_)
                          : state_.offspring;
  }
  // Selector overhead excludes the cache-refresh forward.
  if (times) times->selectMs += msSince(selectStart) - refreshMs;
  return state_;
}

}  // namespace evos
