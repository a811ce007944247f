#include "evos/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace evos {

void ScheduleConfig::validate() const {
  if (beta <= 0 || beta > 1) throw std::invalid_argument("ScheduleConfig: beta must be in (0, 1]");
  if (startRatio <= 0 || startRatio > endRatio || endRatio > 1)
    throw std::invalid_argument("ScheduleConfig: need 0 < startRatio <= endRatio <= 1");
  if (stepCount < 1) throw std::invalid_argument("ScheduleConfig: stepCount must be >= 1");
  if (totalIterations < 1) throw std::invalid_argument("ScheduleConfig: totalIterations must be >= 1");
}

int selectionSize(const ScheduleConfig& config, int t, int coordCount) {
  config.validate();
  if (t < 1 || t > config.totalIterations)
    throw std::out_of_range("selectionSize: t outside [1, T]");
  const int n = coordCount;
  const int capT = config.totalIterations;
  double q;
  switch (config.kind) {
    case ScheduleKind::Constant:
      q = config.beta * n;
      break;
    case ScheduleKind::StepWise: {
      // stepCount equal iteration blocks, ratios evenly spaced from
      // startRatio to endRatio.
      int block = static_cast<int>((static_cast<long long>(t - 1) * config.stepCount) / capT);
      block = std::min(block, config.stepCount - 1);
      const double ratio =
          config.stepCount == 1
              ? config.endRatio
              : config.startRatio +
                    (config.endRatio - config.startRatio) * block / (config.stepCount - 1);
      q = ratio * n;
      break;
    }
    case ScheduleKind::Linear:
      q = static_cast<double>(n) * t / capT;
      break;
    case ScheduleKind::Cosine: {
      const double ramp = (1.0 - std::cos(M_PI * t / capT)) / 2.0;
      q = n * (config.startRatio + (config.endRatio - config.startRatio) * ramp);
      break;
    }
    default:
      throw std::logic_error("selectionSize: unknown schedule kind");
  }
  return std::clamp(roundHalfUp(q), 1, n);
}

int survivorCount(int q, double alpha) {
  if (q < 1) throw std::invalid_argument("survivorCount: q must be >= 1");
  if (alpha < 0) throw std::invalid_argument("survivorCount: alpha must be >= 0");
  return std::max(1, roundHalfUp(q / (1.0 + alpha)));
}

}  // namespace evos
