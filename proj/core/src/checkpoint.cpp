#include <bit>
#include <cstring>
#include <fstream>

#include "evos/mlp.hpp"

namespace evos {
namespace {

constexpr char kMagic[8] = {'E', 'V', 'O', 'S', 'C', 'K', 'P', '1'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint serialization assumes a little-endian host");

template <class T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::ifstream& in, const std::string& path) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error(path + ": truncated checkpoint");
  return value;
}

}  // namespace

void saveCheckpoint(const std::string& path, const MlpModel<float>& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out.write(kMagic, sizeof(kMagic));
  const MlpConfig& c = model.config;
  put<std::uint32_t>(out, c.backbone == Backbone::Siren ? 0u : 1u);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.hiddenLayers));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.hiddenWidth));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.inputDim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.outputDim));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(c.peFrequencies));
  put<float>(out, c.omegaFirst);
  put<float>(out, c.omegaHidden);
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    const auto& w = model.weights[l];
    out.write(reinterpret_cast<const char*>(w.data()),
              static_cast<std::streamsize>(sizeof(float) * w.size()));
    const auto& b = model.biases[l];
    out.write(reinterpret_cast<const char*>(b.data()),
              static_cast<std::streamsize>(sizeof(float) * b.size()));
  }
  if (!out) throw std::runtime_error(path + ": checkpoint write failed");
}

MlpModel<float> loadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open checkpoint");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error(path + ": not an EVOS checkpoint");

  MlpConfig c;
  const std::uint32_t backbone = get<std::uint32_t>(in, path);
  if (backbone > 1) throw std::runtime_error(path + ": unknown backbone tag");
  c.backbone = backbone == 0 ? Backbone::Siren : Backbone::PEMlp;
  c.hiddenLayers = static_cast<int>(get<std::uint32_t>(in, path));
  c.hiddenWidth = static_cast<int>(get<std::uint32_t>(in, path));
  c.inputDim = static_cast<int>(get<std::uint32_t>(in, path));
  c.outputDim = static_cast<int>(get<std::uint32_t>(in, path));
  c.peFrequencies = static_cast<int>(get<std::uint32_t>(in, path));
  c.omegaFirst = get<float>(in, path);
  c.omegaHidden = get<float>(in, path);
  c.validate();

  MlpModel<float> model;
  model.config = c;
  int fanIn = c.encodedInputDim();
  for (int l = 0; l < c.linearLayerCount(); ++l) {
    const int fanOut = l == c.linearLayerCount() - 1 ? c.outputDim : c.hiddenWidth;
    MatrixX<float> w(fanIn, fanOut);
    in.read(reinterpret_cast<char*>(w.data()),
            static_cast<std::streamsize>(sizeof(float) * w.size()));
    VectorX<float> b(fanOut);
    in.read(reinterpret_cast<char*>(b.data()),
            static_cast<std::streamsize>(sizeof(float) * b.size()));
    if (!in) throw std::runtime_error(path + ": truncated checkpoint");
    model.weights.push_back(std::move(w));
    model.biases.push_back(std::move(b));
    fanIn = fanOut;
  }
  return model;
}

}  // namespace evos
