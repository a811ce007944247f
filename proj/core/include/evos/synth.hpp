#pragma once

#include "evos/io.hpp"

namespace evos {

// Deterministic grayscale test card mixing low-frequency gradients, a
// directional ripple, a sharp disk edge and a high-frequency patch, so
// fitting quality separates strategies without shipping a dataset.
ImageRaster makeTestCardImage(int height = 256, int width = 256);

// Deterministic three-tone sine mix for audio fitting runs.
AudioClip makeSineMixClip(double seconds = 2.0, int sampleRate = 8000);

}  // namespace evos
