#pragma once

#include <string>

#include "evos/trainer.hpp"

namespace evos {

// Per-iteration CSV. Columns are fixed:
//   t, elapsed_s, loss_total, loss_low, loss_high, psnr, ssim, q, k,
//   gamma, select_ms, fwd_ms, bwd_ms, opt_ms
// psnr/ssim cells are empty except at evaluation iterations.
void writeRunCsv(const std::string& path, const RunRecord& record);

void writeTimingCsv(const std::string& path, const PhaseTotals& phases);
void writeTargetsCsv(const std::string& path, const std::vector<TargetCrossing>& crossings);

// run.csv + timing.csv + targets.csv + config.txt + reconstruction
// (PNG or WAV) + model.ckpt under config.outputDir; fills the artifact
// paths in `record`. Reconstruction and checkpoint are skipped for
// aborted runs, everything recorded so far is still flushed.
void writeRunArtifacts(const TrainingRun& run, RunRecord& record);

void writeComparisonCsv(const std::string& path, const ComparisonTable& table);
void writeTimeToTargetCsv(const std::string& path, const ComparisonTable& table);

}  // namespace evos
