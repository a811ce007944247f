#pragma once

#include <cstdint>
#include <utility>

#include "evos/field.hpp"
#include "evos/mlp.hpp"
#include "evos/rng.hpp"
#include "evos/signal.hpp"

namespace evos {

// How the key-iteration interval shrinks over training. TOverTotal is
// the published formula tau - theta*t/T (which barely moves for the
// published theta); TLinear is tau - theta*t for users who want the
// interval to actually tighten. See README.
enum class IntervalFormula { TOverTotal, TLinear };

struct SelectorConfig {
  double tau = 100.0;    // base key-iteration interval
  double theta = 0.01;   // interval tightening coefficient
  double alpha = 0.5;    // mutation ratio
  int totalIterations = 5000;
  bool useFitnessEval = true;
  bool useCrossover = true;
  bool useMutation = true;
  IntervalFormula intervalFormula = IntervalFormula::TOverTotal;
  LaplacianKernel kernel = LaplacianKernel::FourNeighbor;
  PaddingMode padding = PaddingMode::Replicate;
  std::uint64_t rngSeed = 0;

  void validate() const;
};

// Full-grid predictions and per-coordinate fitness from the last key
// iteration. Fitness is kept in double so it matches an independent
// recomputation from the same float predictions exactly.
struct FitnessCache {
  MatrixX<float> predictions;   // N x n
  VectorX<double> lowFitness;   // per-coordinate squared error
  VectorX<double> highFitness;  // per-coordinate squared Laplacian residual
  double lowAggregate = 0.0;    // mean of lowFitness
  double highAggregate = 0.0;   // mean of highFitness
  int lastKeyIteration = 0;     // 0 = never populated

  bool populated() const { return lastKeyIteration > 0; }
};

// Index sets for one iteration. All sets are sorted ascending.
struct SelectorState {
  IndexVec survivorsLow;   // x'
  IndexVec survivorsHigh;  // x''
  IndexVec offspring;      // w
  IndexVec selected;       // z
  int iteration = 0;
};

struct SelectPhaseTimes {
  double selectMs = 0.0;   // gamma + top-k + crossover + mutation
  double refreshMs = 0.0;  // full-grid forward + fitness recompute
  int refreshed = 0;
};

// Key-iteration indicator: 1 iff (t-1) mod I == 0 for the clamped
// interval I = max(1, round(tau - theta*t/T)), i.e. t mod I == 1 for
// every I >= 2, and every iteration when the interval reaches 1.
// t = 1 is always a key iteration (the cache must be initialized).
int gamma(int t, const SelectorConfig& config);

// Full-grid trace-free forward; refreshes predictions, both fitness
// vectors and their aggregates, and stamps lastKeyIteration = t.
void refreshCache(const MlpModel<float>& model, const Signal& signal,
                  const SelectorConfig& config, int t, FitnessCache& cache,
                  ForwardScratch<float>* scratch = nullptr);

// Top-k by fitness, ties broken by ascending index.
std::pair<IndexVec, IndexVec> selectSurvivors(const FitnessCache& cache, int k);

// w = (x' ∩ x'') ∪ v' ∪ v'' with the frequency-balanced fill: of the
// l = k - |x' ∩ x''| missing slots, round(p*l) come uniformly from
// x'\x'' and the rest from x''\x', p = lowAgg / (lowAgg + highAgg).
IndexVec crossover(const IndexVec& survivorsLow, const IndexVec& survivorsHigh,
                   const FitnessCache& cache, int k, SplitMix64& rng);

// z = w ∪ (round(alpha*k) uniform draws from the complement of w).
IndexVec mutate(const IndexVec& offspring, int coordCount, double alpha, int k, SplitMix64& rng);

// One training run's selector. Owns the fitness cache, the RNG stream,
// and the survivor/offspring sets, which stay fixed between key
// iterations for a constant k (only mutation redraws every iteration).
class SelectorRun {
 public:
  explicit SelectorRun(const SelectorConfig& config);

  // Orchestrates gamma -> refreshCache -> selectSurvivors -> crossover
  // -> mutate for iteration t with survivor count k.
  const SelectorState& selectSubset(const MlpModel<float>& model, const Signal& signal, int t,
                                    int k, SelectPhaseTimes* times = nullptr);

  const SelectorConfig& config() const { return config_; }
  const FitnessCache& cache() const { return cache_; }
  const SelectorState& state() const { return state_; }

 private:
  SelectorConfig config_;
  SplitMix64 rng_;
  FitnessCache cache_;
  SelectorState state_;
  ForwardScratch<float> forwardScratch_;
  int offspringK_ = -1;  // k the current offspring was built for
};

}  // namespace evos
