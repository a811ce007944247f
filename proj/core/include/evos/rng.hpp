#pragma once

#include <cstdint>

#include "evos/linalg.hpp"

namespace evos {

// SplitMix64: the project-wide RNG. Counter-based (output n is a fixed
// 64-bit mix of seed + n*golden), so replays are identical across
// platforms and compilers. Never swap in std:: distributions here; their
// sequences are implementation-defined.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t nextUint64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double nextDouble() { return static_cast<double>(nextUint64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform in [0, bound) via rejection.
  std::uint64_t nextBelow(std::uint64_t bound);

 private:
  std::uint64_t state_;
};

// Knuth Algorithm S: `count` draws from `population`, uniform without
// replacement, returned in population order (ascending for sorted input).
IndexVec sampleWithoutReplacement(const IndexVec& population, int count, SplitMix64& rng);

// Same over the implicit population [0, n).
IndexVec sampleRange(int n, int count, SplitMix64& rng);

// Indices of the k largest scores, ties broken by ascending index; the
// result itself is sorted ascending.
IndexVec topKIndices(const Eigen::Ref<const VectorX<double>>& scores, int k);

}  // namespace evos
