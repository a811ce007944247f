#include "evos/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evos {

Signal signalFromImage(const ImageRaster& image) {
  if (image.height < 2 || image.width < 2)
    throw std::invalid_argument("signalFromImage: image must be at least 2x2");
  Signal s;
  s.grid = makeGrid2d(image.height, image.width, image.channels);
  const int n = s.grid.coordCount();
  s.coords.resize(n, 2);
  s.attrs.resize(n, image.channels);
  for (int r = 0; r < image.height; ++r) {
    const float rc = static_cast<float>(axisCoordinate(image.height, r));
    for (int c = 0; c < image.width; ++c) {
      const int i = r * image.width + c;
      s.coords(i, 0) = rc;
      s.coords(i, 1) = static_cast<float>(axisCoordinate(image.width, c));
      for (int ch = 0; ch < image.channels; ++ch)
        s.attrs(i, ch) = static_cast<float>(image.at(r, c, ch)) / 255.0f;
    }
  }
  return s;
}

Signal signalFromAudio(const AudioClip& clip, double seconds, int sampleRate,
                       const std::string& label) {
  if (seconds <= 0 || sampleRate <= 0)
    throw std::invalid_argument(label + ": seconds and sampleRate must be positive");
  if (clip.sampleRate != sampleRate)
    throw std::runtime_error(label + ": sample rate mismatch (file " +
                             std::to_string(clip.sampleRate) + " Hz, requested " +
                             std::to_string(sampleRate) + " Hz)");
  const long long wanted = std::llround(seconds * sampleRate);
  if (wanted < 2) throw std::invalid_argument(label + ": requested duration too short");
  if (static_cast<long long>(clip.samples.size()) < wanted)
    throw std::runtime_error(label + ": file shorter than requested duration (" +
                             std::to_string(clip.samples.size()) + " samples, need " +
                             std::to_string(wanted) + ")");
  const int n = static_cast<int>(wanted);
  Signal s;
  s.grid = makeGrid1d(n, 1);
  s.coords.resize(n, 1);
  s.attrs.resize(n, 1);
  for (int i = 0; i < n; ++i) {
    s.coords(i, 0) = static_cast<float>(axisCoordinate(n, i));
    const double a = std::clamp(clip.samples[i] / 32767.0, -1.0, 1.0);
    s.attrs(i, 0) = static_cast<float>((a + 1.0) / 2.0);
  }
  return s;
}

Signal loadImage(const std::string& path, int cropSize) {
  ImageRaster raster = readImageFile(path);
  if (cropSize > 0) raster = centerCrop(raster, cropSize, cropSize);
  return signalFromImage(raster);
}

Signal loadAudio(const std::string& path, double seconds, int sampleRate) {
  return signalFromAudio(readWavFile(path), seconds, sampleRate, path);
}

ImageRaster imageFromAttrs(const GridSpec& grid, const MatrixX<float>& attrs) {
  if (grid.rank != 2) throw std::invalid_argument("imageFromAttrs: rank-2 grid required");
  if (attrs.rows() != grid.coordCount() || attrs.cols() != grid.channelCount)
    throw std::invalid_argument("imageFromAttrs: attrs shape mismatch");
  ImageRaster out;
  out.height = grid.extents[0];
  out.width = grid.extents[1];
  out.channels = grid.channelCount;
  out.pixels.resize(static_cast<std::size_t>(out.height) * out.width * out.channels);
  for (int i = 0; i < grid.coordCount(); ++i)
    for (int ch = 0; ch < out.channels; ++ch) {
      const float v = std::clamp(attrs(i, ch), 0.0f, 1.0f);
      out.pixels[static_cast<std::size_t>(i) * out.channels + ch] =
          static_cast<std::uint8_t>(std::lround(v * 255.0f));
    }
  return out;
}

AudioClip audioFromAttrs(const GridSpec& grid, const MatrixX<float>& attrs, int sampleRate) {
  if (grid.rank != 1) throw std::invalid_argument("audioFromAttrs: rank-1 grid required");
  if (attrs.rows() != grid.coordCount() || attrs.cols() != 1)
    throw std::invalid_argument("audioFromAttrs: attrs shape mismatch");
  AudioClip out;
  out.sampleRate = sampleRate;
  out.samples.resize(grid.coordCount());
  for (int i = 0; i < grid.coordCount(); ++i) {
    const double a = std::clamp(2.0 * attrs(i, 0) - 1.0, -1.0, 1.0);
    out.samples[i] = static_cast<std::int16_t>(std::lround(a * 32767.0));
  }
  return out;
}

}  // namespace evos
