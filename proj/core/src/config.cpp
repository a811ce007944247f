#include "evos/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace evos {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void badValue(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config: invalid value '" + value + "' for key '" + key + "'");
}

int parseInt(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) badValue(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    badValue(key, value);
  } catch (const std::out_of_range&) {
    badValue(key, value);
  }
}

double parseDouble(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) badValue(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    badValue(key, value);
  } catch (const std::out_of_range&) {
    badValue(key, value);
  }
}

std::uint64_t parseSeed(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) badValue(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    badValue(key, value);
  } catch (const std::out_of_range&) {
    badValue(key, value);
  }
}

bool parseBool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "off" || value == "no") return false;
  badValue(key, value);
}

std::vector<double> parseDoubleList(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parseDouble(key, item));
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> parseKeyValueFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  std::map<std::string, std::string> out;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineNo) + ": expected key=value");
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void applyOption(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "strategy") {
    if (value == "standard") c.strategy = Strategy::Standard;
    else if (value == "uniform") c.strategy = Strategy::Uniform;
    else if (value == "evos") c.strategy = Strategy::Evos;
    else badValue(key, value);
  } else if (key == "image") {
    c.source.imagePath = value;
  } else if (key == "audio") {
    c.source.audioPath = value;
  } else if (key == "crop") {
    c.source.cropSize = parseInt(key, value);
  } else if (key == "audio_seconds") {
    c.source.audioSeconds = parseDouble(key, value);
  } else if (key == "audio_sample_rate") {
    c.source.audioSampleRate = parseInt(key, value);
  } else if (key == "backbone") {
    if (value == "siren") c.mlp.backbone = Backbone::Siren;
    else if (value == "pemlp") c.mlp.backbone = Backbone::PEMlp;
    else badValue(key, value);
  } else if (key == "hidden_layers") {
    c.mlp.hiddenLayers = parseInt(key, value);
  } else if (key == "hidden_width") {
    c.mlp.hiddenWidth = parseInt(key, value);
  } else if (key == "omega_first") {
    c.mlp.omegaFirst = static_cast<float>(parseDouble(key, value));
  } else if (key == "omega_hidden") {
    c.mlp.omegaHidden = static_cast<float>(parseDouble(key, value));
  } else if (key == "pe_frequencies") {
    c.mlp.peFrequencies = parseInt(key, value);
  } else if (key == "lr") {
    c.optimizer.learningRate = parseDouble(key, value);
  } else if (key == "beta1") {
    c.optimizer.beta1 = parseDouble(key, value);
  } else if (key == "beta2") {
    c.optimizer.beta2 = parseDouble(key, value);
  } else if (key == "epsilon") {
    c.optimizer.epsilon = parseDouble(key, value);
  } else if (key == "lr_schedule") {
    if (value == "none") c.optimizer.cosineLrDecay = false;
    else if (value == "cosine") c.optimizer.cosineLrDecay = true;
    else badValue(key, value);
  } else if (key == "tau") {
    c.selector.tau = parseDouble(key, value);
  } else if (key == "theta") {
    c.selector.theta = parseDouble(key, value);
  } else if (key == "alpha") {
    c.selector.alpha = parseDouble(key, value);
  } else if (key == "use_fitness_eval") {
    c.selector.useFitnessEval = parseBool(key, value);
  } else if (key == "use_crossover") {
    c.selector.useCrossover = parseBool(key, value);
  } else if (key == "use_mutation") {
    c.selector.useMutation = parseBool(key, value);
  } else if (key == "interval_formula") {
    if (value == "t_over_T") c.selector.intervalFormula = IntervalFormula::TOverTotal;
    else if (value == "t") c.selector.intervalFormula = IntervalFormula::TLinear;
    else badValue(key, value);
  } else if (key == "laplacian_kernel") {
    if (value == "four") c.selector.kernel = LaplacianKernel::FourNeighbor;
    else if (value == "eight") c.selector.kernel = LaplacianKernel::EightNeighbor;
    else badValue(key, value);
  } else if (key == "laplacian_padding") {
    if (value == "replicate") c.selector.padding = PaddingMode::Replicate;
    else if (value == "zero") c.selector.padding = PaddingMode::Zero;
    else badValue(key, value);
  } else if (key == "schedule") {
    if (value == "constant") c.schedule.kind = ScheduleKind::Constant;
    else if (value == "stepwise") c.schedule.kind = ScheduleKind::StepWise;
    else if (value == "linear") c.schedule.kind = ScheduleKind::Linear;
    else if (value == "cosine") c.schedule.kind = ScheduleKind::Cosine;
    else badValue(key, value);
  } else if (key == "beta") {
    c.schedule.beta = parseDouble(key, value);
  } else if (key == "start_ratio") {
    c.schedule.startRatio = parseDouble(key, value);
  } else if (key == "end_ratio") {
    c.schedule.endRatio = parseDouble(key, value);
  } else if (key == "step_count") {
    c.schedule.stepCount = parseInt(key, value);
  } else if (key == "lambda_low") {
    c.loss.lambdaLow = parseDouble(key, value);
  } else if (key == "lambda_high") {
    c.loss.lambdaHigh = parseDouble(key, value);
  } else if (key == "loss_norm") {
    if (value == "mean") c.loss.meanNormalization = true;
    else if (value == "sum") c.loss.meanNormalization = false;
    else badValue(key, value);
  } else if (key == "iters") {
    c.totalIterations = parseInt(key, value);
  } else if (key == "eval_every") {
    c.evalEvery = parseInt(key, value);
  } else if (key == "stop_after") {
    c.stopAfter = parseInt(key, value);
  } else if (key == "seed") {
    c.seed = parseSeed(key, value);
  } else if (key == "out") {
    c.outputDir = value;
  } else if (key == "psnr_targets") {
    c.psnrTargets = parseDoubleList(key, value);
  } else if (key == "threads") {
    c.threads = parseInt(key, value);
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

ExperimentConfig buildConfig(const std::string& configPath,
                             const std::vector<std::string>& overrides) {
  ExperimentConfig c;
  if (!configPath.empty())
    for (const auto& [key, value] : parseKeyValueFile(configPath)) applyOption(c, key, value);
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: override '" + item + "' is not key=value");
    applyOption(c, trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return c;
}

std::string serializeConfig(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "strategy = " << strategyName(c.strategy) << "\n";
  if (!c.source.imagePath.empty()) out << "image = " << c.source.imagePath << "\n";
  if (!c.source.audioPath.empty()) {
    out << "audio = " << c.source.audioPath << "\n";
    out << "audio_seconds = " << c.source.audioSeconds << "\n";
    out << "audio_sample_rate = " << c.source.audioSampleRate << "\n";
  }
  if (c.source.cropSize > 0) out << "crop = " << c.source.cropSize << "\n";
  out << "backbone = " << (c.mlp.backbone == Backbone::Siren ? "siren" : "pemlp") << "\n";
  out << "hidden_layers = " << c.mlp.hiddenLayers << "\n";
  out << "hidden_width = " << c.mlp.hiddenWidth << "\n";
  out << "omega_first = " << c.mlp.omegaFirst << "\n";
  out << "omega_hidden = " << c.mlp.omegaHidden << "\n";
  out << "pe_frequencies = " << c.mlp.peFrequencies << "\n";
  out << "lr = " << c.optimizer.learningRate << "\n";
  out << "beta1 = " << c.optimizer.beta1 << "\n";
  out << "beta2 = " << c.optimizer.beta2 << "\n";
  out << "epsilon = " << c.optimizer.epsilon << "\n";
  out << "lr_schedule = " << (c.optimizer.cosineLrDecay ? "cosine" : "none") << "\n";
  out << "tau = " << c.selector.tau << "\n";
  out << "theta = " << c.selector.theta << "\n";
  out << "alpha = " << c.selector.alpha << "\n";
  out << "use_fitness_eval = " << (c.selector.useFitnessEval ? "true" : "false") << "\n";
  out << "use_crossover = " << (c.selector.useCrossover ? "true" : "false") << "\n";
  out << "use_mutation = " << (c.selector.useMutation ? "true" : "false") << "\n";
  out << "interval_formula = "
      << (c.selector.intervalFormula == IntervalFormula::TOverTotal ? "t_over_T" : "t") << "\n";
  out << "laplacian_kernel = "
      << (c.selector.kernel == LaplacianKernel::FourNeighbor ? "four" : "eight") << "\n";
  out << "laplacian_padding = "
      << (c.selector.padding == PaddingMode::Replicate ? "replicate" : "zero") << "\n";
  const char* schedule = "constant";
  if (c.schedule.kind == ScheduleKind::StepWise) schedule = "stepwise";
  else if (c.schedule.kind == ScheduleKind::Linear) schedule = "linear";
  else if (c.schedule.kind == ScheduleKind::Cosine) schedule = "cosine";
  out << "schedule = " << schedule << "\n";
  out << "beta = " << c.schedule.beta << "\n";
  out << "start_ratio = " << c.schedule.startRatio << "\n";
  out << "end_ratio = " << c.schedule.endRatio << "\n";
  out << "step_count = " << c.schedule.stepCount << "\n";
  out << "lambda_low = " << c.loss.lambdaLow << "\n";
  out << "lambda_high = " << c.loss.lambdaHigh << "\n";
  out << "loss_norm = " << (c.loss.meanNormalization ? "mean" : "sum") << "\n";
  out << "iters = " << c.totalIterations << "\n";
  out << "eval_every = " << c.evalEvery << "\n";
  if (c.stopAfter > 0) out << "stop_after = " << c.stopAfter << "\n";
  out << "seed = " << c.seed << "\n";
  if (!c.outputDir.empty()) out << "out = " << c.outputDir << "\n";
  out << "psnr_targets = ";
  for (std::size_t i = 0; i < c.psnrTargets.size(); ++i)
    out << (i ? "," : "") << c.psnrTargets[i];
  out << "\n";
  if (c.threads > 0) out << "threads = " << c.threads << "\n";
  return out.str();
}

}  // namespace evos
