#include "evos/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evos/rng.hpp"

namespace evos {
namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

VectorX<double> gaussianWindow() {
  VectorX<double> w(kWindow);
  const int half = kWindow / 2;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - half;
    w(i) = std::exp(-d * d / (2.0 * kSigma * kSigma));
  }
  w /= w.sum();
  return w;
}

// Separable valid-mode convolution with a symmetric 1-D kernel.
MatrixX<double> validSeparable(const MatrixX<double>& in, const VectorX<double>& kernel) {
  const Eigen::Index kh = kernel.size();
  MatrixX<double> rows(in.rows() - kh + 1, in.cols());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    rows.row(r).setZero();
    for (Eigen::Index t = 0; t < kh; ++t) rows.row(r) += kernel(t) * in.row(r + t);
  }
  MatrixX<double> out(rows.rows(), in.cols() - kh + 1);
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    out.col(c).setZero();
    for (Eigen::Index t = 0; t < kh; ++t) out.col(c) += kernel(t) * rows.col(c + t);
  }
  return out;
}

MatrixX<double> channelPlane(const FieldBuffer<float>& f, int ch) {
  const int h = f.grid.extents[0];
  const int w = f.grid.extents[1];
  MatrixX<double> plane(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) plane(r, c) = static_cast<double>(f.values(r * w + c, ch));
  return plane;
}

}  // namespace

double meanSquaredError(const MatrixX<float>& pred, const MatrixX<float>& truth) {
  if (pred.rows() != truth.rows() || pred.cols() != truth.cols())
    throw std::invalid_argument("meanSquaredError: shape mismatch");
  const double sum = (pred.cast<double>() - truth.cast<double>()).squaredNorm();
  return sum / static_cast<double>(pred.size());
}

double psnrFromMse(double mse) {
  if (mse < 0) throw std::invalid_argument("psnrFromMse: negative mse");
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double psnr(const FieldBuffer<float>& pred, const FieldBuffer<float>& truth) {
  if (!(pred.grid == truth.grid)) throw std::invalid_argument("psnr: grids do not match");
  return psnrFromMse(meanSquaredError(pred.values, truth.values));
}

double ssim(const FieldBuffer<float>& pred, const FieldBuffer<float>& truth) {
  if (!(pred.grid == truth.grid)) throw std::invalid_argument("ssim: grids do not match");
  if (pred.grid.rank != 2) throw std::invalid_argument("ssim: rank-2 grid required");
  if (pred.grid.extents[0] < kWindow || pred.grid.extents[1] < kWindow)
    throw std::invalid_argument("ssim: both extents must be >= 11");

  const VectorX<double> win = gaussianWindow();
  double acc = 0.0;
  for (int ch = 0; ch < pred.grid.channelCount; ++ch) {
    const MatrixX<double> x = channelPlane(pred, ch);
    const MatrixX<double> y = channelPlane(truth, ch);
    const MatrixX<double> muX = validSeparable(x, win);
    const MatrixX<double> muY = validSeparable(y, win);
    const MatrixX<double> xx = validSeparable(x.cwiseProduct(x), win);
    const MatrixX<double> yy = validSeparable(y.cwiseProduct(y), win);
    const MatrixX<double> xy = validSeparable(x.cwiseProduct(y), win);

    const auto muX2 = muX.array().square();
    const auto muY2 = muY.array().square();
    const auto muXY = (muX.array() * muY.array());
    const auto sigmaX2 = xx.array() - muX2;
    const auto sigmaY2 = yy.array() - muY2;
    const auto sigmaXY = xy.array() - muXY;

    const auto map = ((2.0 * muXY + kC1) * (2.0 * sigmaXY + kC2)) /
                     ((muX2 + muY2 + kC1) * (sigmaX2 + sigmaY2 + kC2));
    acc += map.mean();
  }
  return acc / pred.grid.channelCount;
}

double distributionChange(const VectorX<double>& fitnessA, const VectorX<double>& fitnessB,
                          double sigma, bool unionNumerator) {
  if (fitnessA.size() != fitnessB.size() || fitnessA.size() == 0)
    throw std::invalid_argument("distributionChange: vectors must be nonempty and equal-sized");
  if (sigma <= 0 || sigma >= 1) throw std::invalid_argument("distributionChange: sigma in (0,1)");
  const int n = static_cast<int>(fitnessA.size());
  const int count = std::clamp(roundHalfUp(sigma * n), 1, n);
  const IndexVec a = topKIndices(fitnessA, count);
  const IndexVec b = topKIndices(fitnessB, count);
  IndexVec merged;
  if (unionNumerator) {
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  } else {
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
  }
  return static_cast<double>(merged.size()) / static_cast<double>(count);
}

}  // namespace evos
