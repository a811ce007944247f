#include <cstring>
#include <fstream>
#include <stdexcept>

#include "evos/io.hpp"

namespace evos {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

std::uint32_t readU32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}
std::uint16_t readU16le(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void putU32le(std::ofstream& out, std::uint32_t v) {
  const std::uint8_t b[4] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                             static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}
void putU16le(std::ofstream& out, std::uint16_t v) {
  const std::uint8_t b[2] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

}  // namespace

AudioClip readWavFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (data.size() < 12 || std::memcmp(data.data(), "RIFF", 4) != 0 ||
      std::memcmp(data.data() + 8, "WAVE", 4) != 0)
    fail(path, "not a RIFF/WAVE file");

  AudioClip clip;
  std::uint16_t channels = 0, bitsPerSample = 0, format = 0;
  bool haveFmt = false, haveData = false;

  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const char* id = reinterpret_cast<const char*>(data.data() + pos);
    const std::uint32_t size = readU32le(data.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > data.size()) fail(path, "truncated WAV chunk");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (size < 16) fail(path, "malformed fmt chunk");
      format = readU16le(data.data() + body);
      channels = readU16le(data.data() + body + 2);
      clip.sampleRate = static_cast<int>(readU32le(data.data() + body + 4));
      bitsPerSample = readU16le(data.data() + body + 14);
      haveFmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!haveFmt) fail(path, "data chunk before fmt chunk");
      if (format != 1) fail(path, "unsupported WAV encoding (PCM required)");
      if (bitsPerSample != 16) fail(path, "unsupported bit depth " + std::to_string(bitsPerSample) + " (16-bit PCM required)");
      if (channels != 1) fail(path, "multichannel audio not supported (" + std::to_string(channels) + " channels)");
      const std::size_t count = size / 2;
      clip.samples.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint16_t u = readU16le(data.data() + body + 2 * i);
        clip.samples[i] = static_cast<std::int16_t>(u);
      }
      haveData = true;
    }
    pos = body + size + (size & 1);  // chunks are word-aligned
  }
  if (!haveFmt || !haveData) fail(path, "missing fmt or data chunk");
  return clip;
}

void writeWav(const std::string& path, const AudioClip& clip) {
  if (clip.sampleRate <= 0) throw std::invalid_argument("writeWav: sampleRate must be positive");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");

  const std::uint32_t dataSize = static_cast<std::uint32_t>(clip.samples.size() * 2);
  out.write("RIFF", 4);
  putU32le(out, 36 + dataSize);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  putU32le(out, 16);
  putU16le(out, 1);  // PCM
  putU16le(out, 1);  // mono
  putU32le(out, static_cast<std::uint32_t>(clip.sampleRate));
  putU32le(out, static_cast<std::uint32_t>(clip.sampleRate) * 2);
  putU16le(out, 2);
  putU16le(out, 16);
  out.write("data", 4);
  putU32le(out, dataSize);
  for (std::int16_t s : clip.samples) putU16le(out, static_cast<std::uint16_t>(s));
  if (!out) fail(path, "WAV write failed");
}

}  // namespace evos
