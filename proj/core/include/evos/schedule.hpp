#pragma once

#include "evos/linalg.hpp"

namespace evos {

enum class ScheduleKind { Constant, StepWise, Linear, Cosine };

// Selection-size schedule q(t): how many coordinates train at iteration t.
struct ScheduleConfig {
  ScheduleKind kind = ScheduleKind::Constant;
  double beta = 0.5;        // constant selection ratio
  double startRatio = 0.2;  // StepWise / Cosine ramp start
  double endRatio = 1.0;
  int stepCount = 5;        // StepWise blocks
  int totalIterations = 5000;

  void validate() const;
};

// q(t), always clamped to [1, N]. Rounding is half-up throughout.
int selectionSize(const ScheduleConfig& config, int t, int coordCount);

// Survivor count from q = (1+alpha)k, floor-clamped to 1.
int survivorCount(int q, double alpha);

}  // namespace evos
