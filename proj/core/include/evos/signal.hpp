#pragma once

#include <string>

#include "evos/grid.hpp"
#include "evos/io.hpp"
#include "evos/linalg.hpp"

namespace evos {

// A natural signal as (coordinate, attribute) rows over a regular grid.
// Coordinates live in [-1,1]^m, attributes in [0,1]^n, row i of both
// matrices refers to flat grid index i. Immutable after construction.
struct Signal {
  GridSpec grid;
  MatrixX<float> coords;  // N x m
  MatrixX<float> attrs;   // N x n

  int coordDim() const { return grid.rank; }
  int channelCount() const { return grid.channelCount; }
  int coordCount() const { return grid.coordCount(); }
};

Signal signalFromImage(const ImageRaster& image);
Signal signalFromAudio(const AudioClip& clip, double seconds, int sampleRate,
                       const std::string& label = "audio");

// PNG/BMP file -> rank-2 signal, intensities divided by 255. Optional
// center crop applied before normalization (cropSize 0 = none).
Signal loadImage(const std::string& path, int cropSize = 0);

// Mono 16-bit PCM WAV -> rank-1 signal over the first seconds*sampleRate
// samples, amplitudes mapped [-1,1] -> [0,1] by (a+1)/2.
Signal loadAudio(const std::string& path, double seconds, int sampleRate);

// Inverse normalization of a full-grid attribute field back to 8-bit /
// 16-bit sample space (values clamped to the valid range first).
ImageRaster imageFromAttrs(const GridSpec& grid, const MatrixX<float>& attrs);
AudioClip audioFromAttrs(const GridSpec& grid, const MatrixX<float>& attrs, int sampleRate);

}  // namespace evos
