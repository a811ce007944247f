#include "evos/grid.hpp"

#include <stdexcept>
#include <string>

namespace evos {

void GridSpec::validate() const {
  if (rank != 1 && rank != 2)
    throw std::invalid_argument("GridSpec: rank must be 1 or 2, got " + std::to_string(rank));
  for (int a = 0; a < rank; ++a) {
    if (extents[a] < 2)
      throw std::invalid_argument("GridSpec: extent " + std::to_string(a) + " must be >= 2, got " +
                                  std::to_string(extents[a]));
  }
  if (channelCount < 1)
    throw std::invalid_argument("GridSpec: channelCount must be >= 1");
}

GridSpec makeGrid1d(int samples, int channels) {
  GridSpec g{1, {samples, 0}, channels};
  g.validate();
  return g;
}

GridSpec makeGrid2d(int rows, int cols, int channels) {
  GridSpec g{2, {rows, cols}, channels};
  g.validate();
  return g;
}

int positionToFlatIndex(const GridSpec& grid, const std::array<int, 2>& pos) {
  if (grid.rank == 1) {
    if (pos[0] < 0 || pos[0] >= grid.extents[0])
      throw std::out_of_range("positionToFlatIndex: position out of range");
    return pos[0];
  }
  if (pos[0] < 0 || pos[0] >= grid.extents[0] || pos[1] < 0 || pos[1] >= grid.extents[1])
    throw std::out_of_range("positionToFlatIndex: position out of range");
  return pos[0] * grid.extents[1] + pos[1];
}

std::array<int, 2> flatIndexToPosition(const GridSpec& grid, int i) {
  if (i < 0 || i >= grid.coordCount())
    throw std::out_of_range("flatIndexToPosition: index " + std::to_string(i) +
                            " outside [0, " + std::to_string(grid.coordCount()) + ")");
  if (grid.rank == 1) return {i, 0};
  return {i / grid.extents[1], i % grid.extents[1]};
}

double axisCoordinate(int extent, int index) {
  return -1.0 + 2.0 * static_cast<double>(index) / static_cast<double>(extent - 1);
}

}  // namespace evos
