#include "evos/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evos {

ImageRaster makeTestCardImage(int height, int width) {
  if (height < 2 || width < 2) throw std::invalid_argument("makeTestCardImage: size too small");
  ImageRaster img;
  img.height = height;
  img.width = width;
  img.channels = 1;
  img.pixels.resize(static_cast<std::size_t>(height) * width);
  constexpr double tau = 2.0 * M_PI;
  for (int r = 0; r < height; ++r) {
    const double v = static_cast<double>(r) / (height - 1);
    for (int c = 0; c < width; ++c) {
      const double u = static_cast<double>(c) / (width - 1);
      double value = 0.45;
      value += 0.25 * std::sin(tau * (1.3 * u + 0.4)) * std::cos(tau * (1.7 * v - 0.2));
      value += 0.15 * std::sin(tau * (6.0 * u + 9.0 * v));
      const double du = u - 0.62, dv = v - 0.38;
      if (du * du + dv * dv < 0.22 * 0.22) value += 0.12;
      if (u < 0.5 && v > 0.5) value += 0.08 * std::sin(tau * 14.0 * u) * std::sin(tau * 14.0 * v);
      value = std::clamp(value, 0.02, 0.98);
      img.pixels[static_cast<std::size_t>(r) * width + c] =
          static_cast<std::uint8_t>(std::lround(value * 255.0));
    }
  }
  return img;
}

AudioClip makeSineMixClip(double seconds, int sampleRate) {
  if (seconds <= 0 || sampleRate <= 0)
    throw std::invalid_argument("makeSineMixClip: seconds and sampleRate must be positive");
  AudioClip clip;
  clip.sampleRate = sampleRate;
  const long long count = std::llround(seconds * sampleRate);
  clip.samples.resize(static_cast<std::size_t>(count));
  constexpr double tau = 2.0 * M_PI;
  for (long long i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / sampleRate;
    const double a = 0.45 * std::sin(tau * 220.0 * t) + 0.30 * std::sin(tau * 760.0 * t + 0.5) +
                     0.20 * std::sin(tau * 1800.0 * t + 1.1);
    clip.samples[i] = static_cast<std::int16_t>(std::lround(std::clamp(a, -1.0, 1.0) * 32767.0));
  }
  return clip;
}

}  // namespace evos
