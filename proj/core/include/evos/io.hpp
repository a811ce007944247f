#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evos {

// 8-bit raster, row-major, interleaved channels (1 = gray, 3 = RGB).
struct ImageRaster {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int r, int c, int ch) const {
    return pixels[static_cast<std::size_t>((r * width + c) * channels + ch)];
  }
};

// PNG or BMP, dispatched on the file's magic bytes. 8-bit only.
ImageRaster readImageFile(const std::string& path);
void writePng(const std::string& path, const ImageRaster& image);
void writeBmp(const std::string& path, const ImageRaster& image);

ImageRaster centerCrop(const ImageRaster& image, int cropHeight, int cropWidth);

// Mono 16-bit PCM.
struct AudioClip {
  int sampleRate = 0;
  std::vector<std::int16_t> samples;
};

AudioClip readWavFile(const std::string& path);
void writeWav(const std::string& path, const AudioClip& clip);

}  // namespace evos
