#pragma once

// Shared test helpers. The reference implementations here are written
// as plain scalar loops on purpose: they are the independent oracles
// the library paths are checked against, and must not share code with
// the implementation.

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "evos/field.hpp"
#include "evos/mlp.hpp"
#include "evos/rng.hpp"

namespace testsupport {

inline std::string tempDir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("evos_test_" + tag);
  std::filesystem::create_directories(dir);
  return dir.string();
}

// ---------------------------------------------------------------------------
// Reference Laplacian: direct stencil loops with clamped (replicate) or
// dropped (zero) out-of-range taps.

inline double refLaplacianAt(const std::vector<double>& plane, int rows, int cols, int r, int c,
                             bool eightNeighbor, bool zeroPad) {
  const auto sample = [&](int rr, int cc) -> double {
    if (zeroPad) {
      if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) return 0.0;
    } else {
      rr = std::min(std::max(rr, 0), rows - 1);
      cc = std::min(std::max(cc, 0), cols - 1);
    }
    return plane[static_cast<std::size_t>(rr) * cols + cc];
  };
  double acc = 0.0;
  int taps = 0;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      const bool diagonal = dr != 0 && dc != 0;
      if (diagonal && !eightNeighbor) continue;
      acc += sample(r + dr, c + dc);
      ++taps;
    }
  return acc - taps * plane[static_cast<std::size_t>(r) * cols + c];
}

inline std::vector<double> refLaplacian(const std::vector<double>& plane, int rows, int cols,
                                        bool eightNeighbor = false, bool zeroPad = false) {
  std::vector<double> out(plane.size());
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      out[static_cast<std::size_t>(r) * cols + c] =
          refLaplacianAt(plane, rows, cols, r, c, eightNeighbor, zeroPad);
  return out;
}

inline std::vector<double> refLaplacian1d(const std::vector<double>& line, bool zeroPad = false) {
  const int n = static_cast<int>(line.size());
  std::vector<double> out(line.size());
  for (int i = 0; i < n; ++i) {
    const auto sample = [&](int j) -> double {
      if (zeroPad) return (j < 0 || j >= n) ? 0.0 : line[j];
      return line[std::min(std::max(j, 0), n - 1)];
    };
    out[i] = sample(i - 1) + sample(i + 1) - 2.0 * line[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reference MLP forward in double, scalar loops. Returns outputs and,
// when asked, the hidden pre-activations (for ReLU kink detection in
// finite-difference checks).

struct RefForwardResult {
  std::vector<std::vector<double>> outputs;             // [batch][outputDim]
  std::vector<std::vector<double>> hiddenPreacts;       // [batch][layer*width + unit]
};

inline RefForwardResult refForward(const evos::MlpModel<double>& model,
                                   const std::vector<std::vector<double>>& coords) {
  const evos::MlpConfig& cfg = model.config;
  RefForwardResult result;
  for (const auto& point : coords) {
    std::vector<double> current;
    if (cfg.backbone == evos::Backbone::PEMlp) {
      current = point;
      for (int j = 0; j < cfg.peFrequencies; ++j) {
        const double freq = std::pow(2.0, j) * M_PI;
        for (double x : point) {
          current.push_back(std::sin(freq * x));
          current.push_back(std::cos(freq * x));
        }
      }
    } else {
      current = point;
    }
    std::vector<double> preacts;
    for (int l = 0; l < cfg.hiddenLayers; ++l) {
      const auto& w = model.weights[l];
      const auto& b = model.biases[l];
      std::vector<double> next(static_cast<std::size_t>(w.cols()));
      for (int j = 0; j < w.cols(); ++j) {
        double acc = b(j);
        for (int i = 0; i < w.rows(); ++i) acc += current[i] * w(i, j);
        next[j] = acc;
        preacts.push_back(acc);
      }
      if (cfg.backbone == evos::Backbone::Siren) {
        const double omega = l == 0 ? cfg.omegaFirst : cfg.omegaHidden;
        for (auto& v : next) v = std::sin(omega * v);
      } else {
        for (auto& v : next) v = std::max(v, 0.0);
      }
      current = std::move(next);
    }
    const auto& w = model.weights[cfg.hiddenLayers];
    const auto& b = model.biases[cfg.hiddenLayers];
    std::vector<double> out(static_cast<std::size_t>(w.cols()));
    for (int j = 0; j < w.cols(); ++j) {
      double acc = b(j);
      for (int i = 0; i < w.rows(); ++i) acc += current[i] * w(i, j);
      out[j] = acc;
    }
    result.outputs.push_back(std::move(out));
    result.hiddenPreacts.push_back(std::move(preacts));
  }
  return result;
}

// Random helpers on the project RNG so tests replay identically.
inline double uniform(evos::SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.nextDouble();
}

}  // namespace testsupport
