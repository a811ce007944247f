#pragma once

#include <stdexcept>

#include "evos/grid.hpp"
#include "evos/linalg.hpp"

namespace evos {

enum class LaplacianKernel { FourNeighbor, EightNeighbor };
enum class PaddingMode { Replicate, Zero };

// Full-grid attribute field, N x n, rows in flat-index order.
template <class S>
struct FieldBuffer {
  GridSpec grid;
  MatrixX<S> values;

  template <class T>
  FieldBuffer<T> cast() const {
    return FieldBuffer<T>{grid, values.template cast<T>()};
  }
};

namespace detail {

inline void checkLaplacianField(const GridSpec& grid, Eigen::Index rows, Eigen::Index cols,
                                const char* op) {
  grid.validate();
  for (int a = 0; a < grid.rank; ++a)
    if (grid.extents[a] < 3)
      throw std::invalid_argument(std::string(op) +
                                  ": every extent must be >= 3 (stencil needs interior points)");
  if (rows != grid.coordCount() || cols != grid.channelCount)
    throw std::invalid_argument(std::string(op) + ": field shape does not match grid");
}

// Neighbor taps, listed as +/- pairs along each direction. The center
// coefficient is applied separately.
struct Tap {
  int dr, dc;
};

inline int tapList(LaplacianKernel kernel, int rank, Tap out[8], double* centerWeight) {
  if (rank == 1) {
    out[0] = {-1, 0};
    out[1] = {+1, 0};
    *centerWeight = -2.0;
    return 2;
  }
  if (kernel == LaplacianKernel::FourNeighbor) {
    out[0] = {-1, 0};
    out[1] = {+1, 0};
    out[2] = {0, -1};
    out[3] = {0, +1};
    *centerWeight = -4.0;
    return 4;
  }
  out[0] = {-1, -1};
  out[1] = {+1, +1};
  out[2] = {-1, +1};
  out[3] = {+1, -1};
  out[4] = {-1, 0};
  out[5] = {+1, 0};
  out[6] = {0, -1};
  out[7] = {0, +1};
  *centerWeight = -8.0;
  return 8;
}

}  // namespace detail

// Discrete Laplacian: rank-2 convolves with the 4-neighbor stencil
// [[0,1,0],[1,-4,1],[0,1,0]] (8-neighbor behind the kernel switch),
// rank-1 with [1,-2,1]. Replicate padding keeps constant fields exactly
// zero everywhere including boundaries; neighbor taps are summed as a
// balanced pair tree before subtracting |coeff|*center, so for a
// constant field the cancellation is exact in floating point (2c, 4c,
// 8c are all exactly representable), not just to rounding.
template <class S>
FieldBuffer<S> laplacian(const FieldBuffer<S>& field,
                         LaplacianKernel kernel = LaplacianKernel::FourNeighbor,
                         PaddingMode padding = PaddingMode::Replicate) {
  detail::checkLaplacianField(field.grid, field.values.rows(), field.values.cols(), "laplacian");
  const GridSpec& g = field.grid;

  detail::Tap taps[8];
  double centerW = 0;
  const int tapCount = detail::tapList(kernel, g.rank, taps, &centerW);
  const int rows = g.extents[0];
  const int cols = g.rank == 1 ? 1 : g.extents[1];

  FieldBuffer<S> out{g, MatrixX<S>(field.values.rows(), field.values.cols())};
  for (int ch = 0; ch < g.channelCount; ++ch) {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int i = r * cols + c;
        S pairSum[4] = {S(0), S(0), S(0), S(0)};
        for (int tp = 0; tp < tapCount; ++tp) {
          int rr = r + taps[tp].dr;
          int cc = c + taps[tp].dc;
          if (padding == PaddingMode::Replicate) {
            rr = rr < 0 ? 0 : (rr >= rows ? rows - 1 : rr);
            cc = cc < 0 ? 0 : (cc >= cols ? cols - 1 : cc);
          } else if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) {
            continue;
          }
          pairSum[tp / 2] += field.values(rr * cols + cc, ch);
        }
        const S acc = tapCount <= 2 ? pairSum[0]
                      : tapCount == 4
                          ? pairSum[0] + pairSum[1]
                          : (pairSum[0] + pairSum[1]) + (pairSum[2] + pairSum[3]);
        out.values(i, ch) = acc + static_cast<S>(centerW) * field.values(i, ch);
      }
    }
  }
  return out;
}

// Transpose of the linear map implemented by laplacian with the same
// kernel and padding: the forward gathers out[j] += u[clamp(j+tap)], so
// the adjoint scatters adj[clamp(j+tap)] += v[j]. Under zero padding
// this reduces to convolution with the (symmetric, hence identical)
// flipped kernel; under replicate padding boundary rows accumulate the
// folded coefficients.
template <class S>
FieldBuffer<S> laplacianAdjoint(const FieldBuffer<S>& field,
                                LaplacianKernel kernel = LaplacianKernel::FourNeighbor,
                                PaddingMode padding = PaddingMode::Replicate) {
  detail::checkLaplacianField(field.grid, field.values.rows(), field.values.cols(),
                              "laplacianAdjoint");
  const GridSpec& g = field.grid;

  detail::Tap taps[8];
  double centerW = 0;
  const int tapCount = detail::tapList(kernel, g.rank, taps, &centerW);
  const int rows = g.extents[0];
  const int cols = g.rank == 1 ? 1 : g.extents[1];

  FieldBuffer<S> out{g, MatrixX<S>::Zero(field.values.rows(), field.values.cols())};
  for (int ch = 0; ch < g.channelCount; ++ch) {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const int j = r * cols + c;
        const S v = field.values(j, ch);
        out.values(j, ch) += static_cast<S>(centerW) * v;
        for (int tp = 0; tp < tapCount; ++tp) {
          int rr = r + taps[tp].dr;
          int cc = c + taps[tp].dc;
          if (padding == PaddingMode::Replicate) {
            rr = rr < 0 ? 0 : (rr >= rows ? rows - 1 : rr);
            cc = cc < 0 ? 0 : (cc >= cols ? cols - 1 : cc);
          } else if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) {
            continue;
          }
          out.values(rr * cols + cc, ch) += v;
        }
      }
    }
  }
  return out;
}

// Per-coordinate high-frequency fitness: sum over channels of the squared
// Laplacian residual between prediction and ground truth.
template <class S>
VectorX<S> highFreqResidual(const FieldBuffer<S>& pred, const FieldBuffer<S>& truth,
                            LaplacianKernel kernel = LaplacianKernel::FourNeighbor,
                            PaddingMode padding = PaddingMode::Replicate) {
  if (!(pred.grid == truth.grid))
    throw std::invalid_argument("highFreqResidual: grids do not match");
  const FieldBuffer<S> lp = laplacian(pred, kernel, padding);
  const FieldBuffer<S> lt = laplacian(truth, kernel, padding);
  return (lp.values - lt.values).array().square().matrix().rowwise().sum();
}

}  // namespace evos
