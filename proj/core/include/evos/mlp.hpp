#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "evos/linalg.hpp"
#include "evos/rng.hpp"

namespace evos {

enum class Backbone { Siren, PEMlp };

struct MlpConfig {
  int hiddenLayers = 3;
  int hiddenWidth = 256;
  int inputDim = 2;
  int outputDim = 3;
  Backbone backbone = Backbone::Siren;
  float omegaFirst = 30.0f;   // sine frequency of the first layer
  float omegaHidden = 30.0f;  // sine frequency of the remaining layers
  int peFrequencies = 10;     // positional-encoding levels (PEMlp only)

  int encodedInputDim() const {
    return backbone == Backbone::PEMlp ? inputDim + 2 * inputDim * peFrequencies : inputDim;
  }
  int linearLayerCount() const { return hiddenLayers + 1; }

  void validate() const {
    if (hiddenLayers < 1) throw std::invalid_argument("MlpConfig: hiddenLayers must be >= 1");
    if (hiddenWidth < 1) throw std::invalid_argument("MlpConfig: hiddenWidth must be >= 1");
    if (inputDim < 1 || outputDim < 1)
      throw std::invalid_argument("MlpConfig: inputDim and outputDim must be >= 1");
    if (backbone == Backbone::Siren && (omegaFirst <= 0 || omegaHidden <= 0))
      throw std::invalid_argument("MlpConfig: SIREN omega values must be positive");
    if (backbone == Backbone::PEMlp && peFrequencies < 0)
      throw std::invalid_argument("MlpConfig: peFrequencies must be >= 0");
  }

  friend bool operator==(const MlpConfig&, const MlpConfig&) = default;
};

// Dense coordinate MLP. weights[l] is (fanIn x fanOut); the forward pass
// is x -> encode -> [linear -> activation] * hiddenLayers -> linear.
template <class S>
struct MlpModel {
  MlpConfig config;
  std::vector<MatrixX<S>> weights;
  std::vector<VectorX<S>> biases;

  template <class T>
  MlpModel<T> cast() const {
    MlpModel<T> out;
    out.config = config;
    out.weights.reserve(weights.size());
    out.biases.reserve(biases.size());
    for (const auto& w : weights) out.weights.push_back(w.template cast<T>());
    for (const auto& b : biases) out.biases.push_back(b.template cast<T>());
    return out;
  }

  bool allFinite() const {
    for (const auto& w : weights)
      if (!w.allFinite()) return false;
    for (const auto& b : biases)
      if (!b.allFinite()) return false;
    return true;
  }
};

// Caches from one forward pass with keepTrace: everything backward needs.
template <class S>
struct ForwardTrace {
  MatrixX<S> encoded;               // B x encodedInputDim
  std::vector<MatrixX<S>> preacts;  // hidden layer l: B x width, pre-activation
  std::vector<MatrixX<S>> acts;     // hidden layer l: B x width, post-activation
  Eigen::Index batch = 0;
};

template <class S>
struct Gradients {
  std::vector<MatrixX<S>> weights;
  std::vector<VectorX<S>> biases;

  bool allFinite() const {
    for (const auto& w : weights)
      if (!w.allFinite()) return false;
    for (const auto& b : biases)
      if (!b.allFinite()) return false;
    return true;
  }
};

template <class S>
struct AdamState {
  std::vector<MatrixX<S>> momentW, velocityW;
  std::vector<VectorX<S>> momentB, velocityB;
  long stepCount = 0;
  S learningRate = S(1e-4);
  S beta1 = S(0.9);
  S beta2 = S(0.999);
  S epsilon = S(1e-8);
};

// ---------------------------------------------------------------------------
// Implementation

namespace detail {

// All initialization draws happen in double so float and double models
// built from one seed agree exactly (the float model is the rounded
// double model). Weights fill column-major, then the bias vector.
inline double uniformDraw(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.nextDouble();
}

}  // namespace detail

template <class S>
MlpModel<S> initModel(const MlpConfig& config, std::uint64_t seed) {
  config.validate();
  SplitMix64 rng(seed);
  MlpModel<S> model;
  model.config = config;

  const int layers = config.linearLayerCount();
  int fanIn = config.encodedInputDim();
  for (int l = 0; l < layers; ++l) {
    const int fanOut = l == layers - 1 ? config.outputDim : config.hiddenWidth;
    double bound;
    if (config.backbone == Backbone::Siren) {
      bound = l == 0 ? 1.0 / config.inputDim
                     : std::sqrt(6.0 / fanIn) / static_cast<double>(config.omegaHidden);
    } else {
      bound = 1.0 / std::sqrt(static_cast<double>(fanIn));
    }
    MatrixX<S> w(fanIn, fanOut);
    for (int c = 0; c < fanOut; ++c)
      for (int r = 0; r < fanIn; ++r)
        w(r, c) = static_cast<S>(detail::uniformDraw(rng, -bound, bound));
    const double biasBound = 1.0 / std::sqrt(static_cast<double>(fanIn));
    VectorX<S> b(fanOut);
    for (int r = 0; r < fanOut; ++r)
      b(r) = static_cast<S>(detail::uniformDraw(rng, -biasBound, biasBound));
    model.weights.push_back(std::move(w));
    model.biases.push_back(std::move(b));
    fanIn = fanOut;
  }
  return model;
}

// Positional encoding [x, sin(2^j pi x), cos(2^j pi x)]_{j<L} per axis;
// identity for SIREN.
template <class S>
MatrixX<S> encodeInput(const MlpConfig& config, const Eigen::Ref<const MatrixX<S>>& coords) {
  if (config.backbone != Backbone::PEMlp) return coords;
  const Eigen::Index batch = coords.rows();
  const int m = config.inputDim;
  MatrixX<S> out(batch, config.encodedInputDim());
  out.leftCols(m) = coords;
  Eigen::Index col = m;
  for (int j = 0; j < config.peFrequencies; ++j) {
    const S freq = static_cast<S>(std::pow(2.0, j) * M_PI);
    for (int a = 0; a < m; ++a) {
      out.col(col++) = (coords.col(a) * freq).array().sin();
      out.col(col++) = (coords.col(a) * freq).array().cos();
    }
  }
  return out;
}

namespace detail {

// GEMM with a tiny inner dimension (first SIREN layer, output-layer
// backprop) is faster as a lazy outer-product expression.
template <class S, class A, class B, class Out>
void productInto(Out&& out, const A& a, const B& b) {
  if (a.cols() <= 4)
    out.noalias() = a.lazyProduct(b);
  else
    out.noalias() = a * b;
}

}  // namespace detail

// Ping-pong buffers for trace-free forwards (evaluation snapshots,
// cache refreshes); persist one across calls to avoid remapping
// batch-sized matrices every time.
template <class S>
struct ForwardScratch {
  MatrixX<S> ping, pong;
};

template <class S>
MatrixX<S> forward(const MlpModel<S>& model, const Eigen::Ref<const MatrixX<S>>& coords,
                   ForwardTrace<S>* trace = nullptr, ForwardScratch<S>* scratch = nullptr) {
  const MlpConfig& cfg = model.config;
  if (coords.cols() != cfg.inputDim)
    throw std::invalid_argument("forward: coords have " + std::to_string(coords.cols()) +
                                " columns, model expects " + std::to_string(cfg.inputDim));
  if (!coords.allFinite()) throw std::invalid_argument("forward: non-finite input coordinates");

  const int hidden = cfg.hiddenLayers;
  const auto activate = [&cfg](MatrixX<S>& pre, int l, const VectorX<S>& bias) {
    pre.rowwise() += bias.transpose();
    if (cfg.backbone == Backbone::Siren) {
      const S omega = static_cast<S>(l == 0 ? cfg.omegaFirst : cfg.omegaHidden);
      pre = (pre * omega).array().sin();
    } else {
      pre = pre.cwiseMax(S(0));
    }
  };

  MatrixX<S> out;
  if (trace) {
    ForwardTrace<S>& t = *trace;
    t.batch = coords.rows();
    t.preacts.resize(hidden);
    t.acts.resize(hidden);
    t.encoded = encodeInput<S>(cfg, coords);
    const MatrixX<S>* input = &t.encoded;
    for (int l = 0; l < hidden; ++l) {
      MatrixX<S>& pre = t.preacts[l];
      detail::productInto<S>(pre, *input, model.weights[l]);
      pre.rowwise() += model.biases[l].transpose();
      if (cfg.backbone == Backbone::Siren) {
        const S omega = static_cast<S>(l == 0 ? cfg.omegaFirst : cfg.omegaHidden);
        t.acts[l] = (pre * omega).array().sin();
      } else {
        t.acts[l] = pre.cwiseMax(S(0));
      }
      input = &t.acts[l];
    }
    detail::productInto<S>(out, *input, model.weights[hidden]);
  } else {
    ForwardScratch<S> local;
    ForwardScratch<S>& ws = scratch ? *scratch : local;
    MatrixX<S>* cur = &ws.ping;
    if (cfg.backbone == Backbone::PEMlp) {
      ws.pong = encodeInput<S>(cfg, coords);
      detail::productInto<S>(*cur, ws.pong, model.weights[0]);
    } else {
      detail::productInto<S>(*cur, coords, model.weights[0]);
    }
    activate(*cur, 0, model.biases[0]);
    for (int l = 1; l < hidden; ++l) {
      MatrixX<S>& dst = cur == &ws.ping ? ws.pong : ws.ping;
      detail::productInto<S>(dst, *cur, model.weights[l]);
      activate(dst, l, model.biases[l]);
      cur = &dst;
    }
    detail::productInto<S>(out, *cur, model.weights[hidden]);
  }
  out.rowwise() += model.biases[hidden].transpose();
  return out;
}

// Reusable backward buffers; callers in a training loop keep one across
// iterations to avoid remapping two batch-sized matrices per step.
template <class S>
struct BackwardScratch {
  MatrixX<S> dAct, dPre;
};

// Exact reverse-mode gradients of sum_batch <outputGrad, forward> w.r.t.
// every weight and bias. Requires a trace from forward(..., &trace).
template <class S>
Gradients<S> backward(const MlpModel<S>& model, const ForwardTrace<S>& trace,
                      const Eigen::Ref<const MatrixX<S>>& outputGrad,
                      BackwardScratch<S>* scratch = nullptr) {
  const MlpConfig& cfg = model.config;
  const int hidden = cfg.hiddenLayers;
  if (static_cast<int>(trace.preacts.size()) != hidden || trace.encoded.rows() != trace.batch)
    throw std::invalid_argument("backward: trace does not match model");
  if (outputGrad.rows() != trace.batch || outputGrad.cols() != cfg.outputDim)
    throw std::invalid_argument("backward: outputGrad shape does not match trace batch");

  Gradients<S> grads;
  grads.weights.resize(hidden + 1);
  grads.biases.resize(hidden + 1);
  BackwardScratch<S> local;
  BackwardScratch<S>& ws = scratch ? *scratch : local;

  // Output layer.
  grads.weights[hidden].noalias() = trace.acts[hidden - 1].transpose() * outputGrad;
  grads.biases[hidden] = outputGrad.colwise().sum().transpose();
  detail::productInto<S>(ws.dAct, outputGrad, model.weights[hidden].transpose());

  for (int l = hidden - 1; l >= 0; --l) {
    if (cfg.backbone == Backbone::Siren) {
      const S omega = static_cast<S>(l == 0 ? cfg.omegaFirst : cfg.omegaHidden);
      ws.dPre = ws.dAct.array() * (trace.preacts[l] * omega).array().cos() * omega;
    } else {
      ws.dPre = ws.dAct.array() * (trace.preacts[l].array() > S(0)).template cast<S>();
    }
    const MatrixX<S>& input = l == 0 ? trace.encoded : trace.acts[l - 1];
    grads.weights[l].noalias() = input.transpose() * ws.dPre;
    grads.biases[l] = ws.dPre.colwise().sum().transpose();
    if (l > 0) detail::productInto<S>(ws.dAct, ws.dPre, model.weights[l].transpose());
  }
  return grads;
}

template <class S>
AdamState<S> makeAdamState(const MlpModel<S>& model, S learningRate = S(1e-4),
                           S beta1 = S(0.9), S beta2 = S(0.999), S epsilon = S(1e-8)) {
  AdamState<S> state;
  state.learningRate = learningRate;
  state.beta1 = beta1;
  state.beta2 = beta2;
  state.epsilon = epsilon;
  for (const auto& w : model.weights) {
    state.momentW.push_back(MatrixX<S>::Zero(w.rows(), w.cols()));
    state.velocityW.push_back(MatrixX<S>::Zero(w.rows(), w.cols()));
  }
  for (const auto& b : model.biases) {
    state.momentB.push_back(VectorX<S>::Zero(b.size()));
    state.velocityB.push_back(VectorX<S>::Zero(b.size()));
  }
  return state;
}

// Canonical Adam with bias correction.
template <class S>
void adamStep(MlpModel<S>& model, AdamState<S>& state, const Gradients<S>& grads) {
  if (grads.weights.size() != model.weights.size() || grads.biases.size() != model.biases.size())
    throw std::invalid_argument("adamStep: gradient layer count mismatch");
  if (!grads.allFinite()) throw std::runtime_error("adamStep: non-finite gradients");

  state.stepCount += 1;
  const S b1 = state.beta1, b2 = state.beta2;
  const S corr1 = S(1) - static_cast<S>(std::pow(static_cast<double>(b1), state.stepCount));
  const S corr2 = S(1) - static_cast<S>(std::pow(static_cast<double>(b2), state.stepCount));
  const S lr = state.learningRate;
  const S eps = state.epsilon;

  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    if (grads.weights[l].rows() != model.weights[l].rows() ||
        grads.weights[l].cols() != model.weights[l].cols())
      throw std::invalid_argument("adamStep: gradient shape mismatch at layer " + std::to_string(l));
    auto& m = state.momentW[l];
    auto& v = state.velocityW[l];
    m = b1 * m + (S(1) - b1) * grads.weights[l];
    v = b2 * v.array().matrix() + (S(1) - b2) * grads.weights[l].array().square().matrix();
    model.weights[l].array() -=
        lr * (m.array() / corr1) / ((v.array() / corr2).sqrt() + eps);

    auto& mb = state.momentB[l];
    auto& vb = state.velocityB[l];
    mb = b1 * mb + (S(1) - b1) * grads.biases[l];
    vb = b2 * vb.array().matrix() + (S(1) - b2) * grads.biases[l].array().square().matrix();
    model.biases[l].array() -=
        lr * (mb.array() / corr1) / ((vb.array() / corr2).sqrt() + eps);
  }
}

// Little-endian binary checkpoint: magic + config header + tensors in
// declaration order (weights column-major, then bias, per layer).
void saveCheckpoint(const std::string& path, const MlpModel<float>& model);
MlpModel<float> loadCheckpoint(const std::string& path);

}  // namespace evos
