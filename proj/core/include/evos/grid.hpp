#pragma once

#include <array>
#include <cstdint>

namespace evos {

// Regular sampling grid behind a signal: 1D for audio, 2D for images.
// Flat indices are row-major; every module (Laplacian stencils, fitness
// caches, selector index sets) relies on the same bijection.
struct GridSpec {
  int rank = 2;                     // 1 or 2
  std::array<int, 2> extents{0, 0}; // extents[0..rank); extents[0] = rows for rank 2
  int channelCount = 1;

  int coordCount() const {
    return rank == 1 ? extents[0] : extents[0] * extents[1];
  }
  void validate() const; // throws std::invalid_argument

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

GridSpec makeGrid1d(int samples, int channels = 1);
GridSpec makeGrid2d(int rows, int cols, int channels);

int positionToFlatIndex(const GridSpec& grid, const std::array<int, 2>& pos);
std::array<int, 2> flatIndexToPosition(const GridSpec& grid, int i);

// Per-axis linspace over [-1, 1] including endpoints.
double axisCoordinate(int extent, int index);

}  // namespace evos
