#pragma once

#include <stdexcept>
#include <string>

#include "evos/field.hpp"
#include "evos/linalg.hpp"

namespace evos {

struct LossConfig {
  double lambdaLow = 1.0;
  double lambdaHigh = 1e-5;
  // Mean normalization (over |z| for the low term, over N for the high
  // term) keeps the lambdas resolution-independent; false reproduces the
  // raw squared-norm form.
  bool meanNormalization = true;
  LaplacianKernel kernel = LaplacianKernel::FourNeighbor;
  PaddingMode padding = PaddingMode::Replicate;

  void validate() const {
    if (lambdaLow < 0 || lambdaHigh < 0)
      throw std::invalid_argument("LossConfig: lambdas must be >= 0");
  }
};

struct LossReport {
  double total = 0.0;
  double low = 0.0;
  double high = 0.0;
};

namespace detail {

inline void checkSelection(const IndexVec& z, Eigen::Index predRows, int coordCount,
                           const char* op) {
  if (z.empty()) throw std::invalid_argument(std::string(op) + ": empty selection");
  if (static_cast<Eigen::Index>(z.size()) != predRows)
    throw std::invalid_argument(std::string(op) + ": |predZ| != |z|");
  int prev = -1;
  for (int i : z) {
    if (i <= prev || i >= coordCount)
      throw std::invalid_argument(std::string(op) +
                                  ": selection must be strictly increasing within [0, N)");
    prev = i;
  }
}

}  // namespace detail

// Full-grid field with fresh predictions at indices z and the cached
// key-iteration predictions everywhere else.
template <class S>
FieldBuffer<S> mergedField(const Eigen::Ref<const MatrixX<S>>& predZ, const IndexVec& z,
                           const GridSpec& grid, const MatrixX<S>& cachedPredictions) {
  if (cachedPredictions.rows() != grid.coordCount() ||
      cachedPredictions.cols() != grid.channelCount)
    throw std::invalid_argument("mergedField: cache unpopulated or shape mismatch");
  detail::checkSelection(z, predZ.rows(), grid.coordCount(), "mergedField");
  FieldBuffer<S> out{grid, cachedPredictions};
  for (std::size_t i = 0; i < z.size(); ++i) out.values.row(z[i]) = predZ.row(i);
  return out;
}

// Cross-frequency loss and its exact gradient with respect to predZ.
// The low term compares fresh predictions with ground truth at z; the
// high term compares Laplacians of the merged field and the truth over
// the whole grid. Cached entries are constants: no gradient flows to
// them, so the high-term gradient is the Laplacian adjoint of the
// residual restricted to rows z. With lambdaHigh == 0 the Laplacian
// terms are skipped entirely.
template <class S>
LossReport crossFrequencyLoss(const Eigen::Ref<const MatrixX<S>>& predZ, const IndexVec& z,
                              const MatrixX<S>* cachedPredictions, const FieldBuffer<S>& truth,
                              const LossConfig& config, MatrixX<S>* gradZ,
                              const FieldBuffer<S>* truthLaplacian = nullptr) {
  config.validate();
  const GridSpec& grid = truth.grid;
  const int n = grid.channelCount;
  detail::checkSelection(z, predZ.rows(), grid.coordCount(), "crossFrequencyLoss");
  if (predZ.cols() != n) throw std::invalid_argument("crossFrequencyLoss: channel mismatch");
  if (truth.values.rows() != grid.coordCount() || truth.values.cols() != n)
    throw std::invalid_argument("crossFrequencyLoss: truth shape mismatch");

  const Eigen::Index zn = predZ.rows();
  MatrixX<S> diff(zn, n);
  for (Eigen::Index i = 0; i < zn; ++i) diff.row(i) = predZ.row(i) - truth.values.row(z[i]);

  const double lowDenom = config.meanNormalization ? static_cast<double>(zn) * n : 1.0;
  const double lowRaw = static_cast<double>(diff.squaredNorm());
  const double lossLow = lowRaw / lowDenom;

  if (gradZ) *gradZ = diff * static_cast<S>(2.0 * config.lambdaLow / lowDenom);

  double lossHigh = 0.0;
  if (config.lambdaHigh > 0.0) {
    if (!cachedPredictions || cachedPredictions->rows() != grid.coordCount())
      throw std::logic_error("crossFrequencyLoss: lambdaHigh > 0 requires a populated cache");
    const FieldBuffer<S> merged = mergedField<S>(predZ, z, grid, *cachedPredictions);
    FieldBuffer<S> residual = laplacian(merged, config.kernel, config.padding);
    if (truthLaplacian) {
      residual.values -= truthLaplacian->values;
    } else {
      residual.values -= laplacian(truth, config.kernel, config.padding).values;
    }
    const double highDenom =
        config.meanNormalization ? static_cast<double>(grid.coordCount()) * n : 1.0;
    lossHigh = static_cast<double>(residual.values.squaredNorm()) / highDenom;
    if (gradZ) {
      const FieldBuffer<S> adjoint = laplacianAdjoint(residual, config.kernel, config.padding);
      const S scale = static_cast<S>(2.0 * config.lambdaHigh / highDenom);
      for (Eigen::Index i = 0; i < zn; ++i)
        gradZ->row(i) += scale * adjoint.values.row(z[i]);
    }
  }

  LossReport report;
  report.low = lossLow;
  report.high = lossHigh;
  report.total = config.lambdaLow * lossLow + config.lambdaHigh * lossHigh;
  return report;
}

}  // namespace evos
