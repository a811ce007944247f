#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

#include "evos/io.hpp"

namespace evos {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

ImageRaster readPng(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) fail(path, "cannot open file");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(path, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "PNG decode error");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bitDepth = png_get_bit_depth(png, info);
  const int colorType = png_get_color_type(png, info);

  if (bitDepth == 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "unsupported bit depth 16 (8-bit PNG required)");
  }
  // Normalize palette / low-depth / alpha variants down to 8-bit gray or RGB.
  if (colorType == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (colorType == PNG_COLOR_TYPE_GRAY && bitDepth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (colorType & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "unsupported channel count " + std::to_string(channels));
  }

  ImageRaster out;
  out.height = static_cast<int>(height);
  out.width = static_cast<int>(width);
  out.channels = channels;
  out.pixels.resize(static_cast<std::size_t>(height) * width * channels);

  std::vector<png_bytep> rows(height);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (png_uint_32 r = 0; r < height; ++r) rows[r] = out.pixels.data() + r * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

std::uint32_t readU32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t readU16le(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

// Uncompressed BI_RGB bitmaps, 8-bit (paletted gray) or 24-bit.
ImageRaster readBmp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (data.size() < 54 || data[0] != 'B' || data[1] != 'M') fail(path, "not a BMP file");

  const std::uint32_t pixelOffset = readU32le(&data[10]);
  const std::uint32_t headerSize = readU32le(&data[14]);
  if (headerSize < 40) fail(path, "unsupported BMP header");
  const std::int32_t width = static_cast<std::int32_t>(readU32le(&data[18]));
  const std::int32_t heightRaw = static_cast<std::int32_t>(readU32le(&data[22]));
  const std::uint16_t bpp = readU16le(&data[28]);
  const std::uint32_t compression = readU32le(&data[30]);
  if (compression != 0) fail(path, "compressed BMP not supported");
  if (bpp != 8 && bpp != 24) fail(path, "unsupported bit depth " + std::to_string(bpp) + " (8 or 24 required)");
  if (width <= 0 || heightRaw == 0) fail(path, "invalid BMP dimensions");

  const bool bottomUp = heightRaw > 0;
  const int height = bottomUp ? heightRaw : -heightRaw;
  const int channels = bpp == 8 ? 1 : 3;
  const std::size_t rowSize = (static_cast<std::size_t>(width) * (bpp / 8) + 3) & ~std::size_t{3};
  if (data.size() < pixelOffset + rowSize * height) fail(path, "truncated BMP pixel data");

  ImageRaster out;
  out.height = height;
  out.width = width;
  out.channels = channels;
  out.pixels.resize(static_cast<std::size_t>(height) * width * channels);
  for (int r = 0; r < height; ++r) {
    const int srcRow = bottomUp ? height - 1 - r : r;
    const std::uint8_t* src = data.data() + pixelOffset + rowSize * srcRow;
    for (int c = 0; c < width; ++c) {
      if (channels == 1) {
        out.pixels[static_cast<std::size_t>(r) * width + c] = src[c];
      } else {
        // BMP stores BGR.
        const std::uint8_t* px = src + 3 * c;
        std::uint8_t* dst = out.pixels.data() + (static_cast<std::size_t>(r) * width + c) * 3;
        dst[0] = px[2];
        dst[1] = px[1];
        dst[2] = px[0];
      }
    }
  }
  return out;
}

void validateRaster(const ImageRaster& image) {
  if (image.height <= 0 || image.width <= 0) throw std::invalid_argument("empty image raster");
  if (image.channels != 1 && image.channels != 3)
    throw std::invalid_argument("image raster must have 1 or 3 channels");
  if (image.pixels.size() !=
      static_cast<std::size_t>(image.height) * image.width * image.channels)
    throw std::invalid_argument("image raster pixel buffer size mismatch");
}

void writeU32le(std::ofstream& out, std::uint32_t v) {
  const std::uint8_t b[4] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                             static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}
void writeU16le(std::ofstream& out, std::uint16_t v) {
  const std::uint8_t b[2] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

ImageRaster readImageFile(const std::string& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) fail(path, "cannot open file");
  unsigned char magic[8] = {};
  probe.read(reinterpret_cast<char*>(magic), 8);
  if (probe.gcount() >= 8 && png_sig_cmp(magic, 0, 8) == 0) return readPng(path);
  if (probe.gcount() >= 2 && magic[0] == 'B' && magic[1] == 'M') return readBmp(path);
  fail(path, "unrecognized image format (PNG or BMP expected)");
}

void writePng(const std::string& path, const ImageRaster& image) {
  validateRaster(image);
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) fail(path, "cannot open file for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(path, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(path, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "PNG encode error");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, image.width, image.height, 8,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(image.width) * image.channels;
  for (int r = 0; r < image.height; ++r)
    png_write_row(png, const_cast<png_bytep>(image.pixels.data() + r * stride));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void writeBmp(const std::string& path, const ImageRaster& image) {
  validateRaster(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");

  const int bpp = image.channels == 1 ? 8 : 24;
  const std::size_t rowSize = (static_cast<std::size_t>(image.width) * (bpp / 8) + 3) & ~std::size_t{3};
  const std::uint32_t paletteSize = image.channels == 1 ? 256 * 4 : 0;
  const std::uint32_t pixelOffset = 14 + 40 + paletteSize;
  const std::uint32_t fileSize = pixelOffset + static_cast<std::uint32_t>(rowSize * image.height);

  out.put('B');
  out.put('M');
  writeU32le(out, fileSize);
  writeU32le(out, 0);
  writeU32le(out, pixelOffset);
  writeU32le(out, 40);
  writeU32le(out, static_cast<std::uint32_t>(image.width));
  writeU32le(out, static_cast<std::uint32_t>(image.height));
  writeU16le(out, 1);
  writeU16le(out, static_cast<std::uint16_t>(bpp));
  writeU32le(out, 0);
  writeU32le(out, static_cast<std::uint32_t>(rowSize * image.height));
  writeU32le(out, 2835);
  writeU32le(out, 2835);
  writeU32le(out, image.channels == 1 ? 256 : 0);
  writeU32le(out, 0);
  if (image.channels == 1) {
    for (int v = 0; v < 256; ++v) {
      const char entry[4] = {static_cast<char>(v), static_cast<char>(v), static_cast<char>(v), 0};
      out.write(entry, 4);
    }
  }
  std::vector<std::uint8_t> row(rowSize, 0);
  for (int r = image.height - 1; r >= 0; --r) {
    for (int c = 0; c < image.width; ++c) {
      if (image.channels == 1) {
        row[c] = image.at(r, c, 0);
      } else {
        row[3 * c + 0] = image.at(r, c, 2);
        row[3 * c + 1] = image.at(r, c, 1);
        row[3 * c + 2] = image.at(r, c, 0);
      }
    }
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(rowSize));
  }
  if (!out) fail(path, "BMP write failed");
}

ImageRaster centerCrop(const ImageRaster& image, int cropHeight, int cropWidth) {
  validateRaster(image);
  if (cropHeight < 1 || cropWidth < 1 || cropHeight > image.height || cropWidth > image.width)
    throw std::invalid_argument("centerCrop: crop size outside image bounds");
  const int r0 = (image.height - cropHeight) / 2;
  const int c0 = (image.width - cropWidth) / 2;
  ImageRaster out;
  out.height = cropHeight;
  out.width = cropWidth;
  out.channels = image.channels;
  out.pixels.resize(static_cast<std::size_t>(cropHeight) * cropWidth * image.channels);
  for (int r = 0; r < cropHeight; ++r)
    for (int c = 0; c < cropWidth; ++c)
      for (int ch = 0; ch < image.channels; ++ch)
        out.pixels[(static_cast<std::size_t>(r) * cropWidth + c) * image.channels + ch] =
            image.at(r0 + r, c0 + c, ch);
  return out;
}

}  // namespace evos
