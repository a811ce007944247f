#include "evos/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace evos {

std::uint64_t SplitMix64::nextBelow(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("SplitMix64::nextBelow: bound must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = nextUint64();
  } while (v >= limit);
  return v % bound;
}

IndexVec sampleWithoutReplacement(const IndexVec& population, int count, SplitMix64& rng) {
  if (count < 0 || count > static_cast<int>(population.size()))
    throw std::invalid_argument("sampleWithoutReplacement: count outside [0, population size]");
  IndexVec out;
  out.reserve(count);
  std::uint64_t remaining = population.size();
  std::uint64_t needed = count;
  for (int v : population) {
    if (needed == 0) break;
    if (rng.nextBelow(remaining) < needed) {
      out.push_back(v);
      --needed;
    }
    --remaining;
  }
  return out;
}

IndexVec sampleRange(int n, int count, SplitMix64& rng) {
  if (count < 0 || count > n)
    throw std::invalid_argument("sampleRange: count outside [0, n]");
  IndexVec out;
  out.reserve(count);
  std::uint64_t remaining = n;
  std::uint64_t needed = count;
  for (int v = 0; v < n; ++v) {
    if (needed == 0) break;
    if (rng.nextBelow(remaining) < needed) {
      out.push_back(v);
      --needed;
    }
    --remaining;
  }
  return out;
}

IndexVec topKIndices(const Eigen::Ref<const VectorX<double>>& scores, int k) {
  const int n = static_cast<int>(scores.size());
  if (k < 1 || k > n) throw std::invalid_argument("topKIndices: k outside [1, N]");
  IndexVec idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const auto better = [&scores](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  };
  if (k < n) std::nth_element(idx.begin(), idx.begin() + (k - 1), idx.end(), better);
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace evos
