#pragma once

#include "evos/field.hpp"
#include "evos/linalg.hpp"

namespace evos {

// One periodic evaluation sample. elapsedSeconds counts training time
// only; evaluation passes are fenced out of the clock.
struct QualitySnapshot {
  int iteration = 0;
  double elapsedSeconds = 0.0;
  double mse = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;  // NaN for rank-1 signals
};

double meanSquaredError(const MatrixX<float>& pred, const MatrixX<float>& truth);

// 10*log10(1/mse) for the [0,1] attribute range; +inf when mse == 0.
double psnrFromMse(double mse);
double psnr(const FieldBuffer<float>& pred, const FieldBuffer<float>& truth);

// Canonical SSIM: 11x11 Gaussian window (sigma 1.5), C1=0.01^2,
// C2=0.03^2 on the [0,1] range, per channel, mean over valid window
// positions. Rank-2 grids with extents >= 11 only.
double ssim(const FieldBuffer<float>& pred, const FieldBuffer<float>& truth);

// Distribution-change measure G(sigma): overlap of the top-(sigma*N)
// error sets of two fitness vectors, as a fraction of the set size.
// The union numerator reproduces the published symbol form (values may
// exceed 1); the default intersection form matches the prose.
double distributionChange(const VectorX<double>& fitnessA, const VectorX<double>& fitnessB,
                          double sigma, bool unionNumerator = false);

}  // namespace evos
