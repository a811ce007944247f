#include "evos/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "evos/config.hpp"

namespace evos {
namespace {

namespace fs = std::filesystem;

// %.9g keeps float32-derived values round-trippable and the files byte-
// reproducible for identical runs.
std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

}  // namespace

void writeRunCsv(const std::string& path, const RunRecord& record) {
  auto out = openOut(path);
  out << "t,elapsed_s,loss_total,loss_low,loss_high,psnr,ssim,q,k,gamma,"
         "select_ms,fwd_ms,bwd_ms,opt_ms\n";
  for (const auto& r : record.rows) {
    out << r.t << ',' << num(r.elapsedS) << ',' << num(r.lossTotal) << ',' << num(r.lossLow)
        << ',' << num(r.lossHigh) << ',' << num(r.psnr) << ',' << num(r.ssim) << ',' << r.q
        << ',' << r.k << ',' << r.gammaFlag << ',' << num(r.selectMs) << ',' << num(r.fwdMs)
        << ',' << num(r.bwdMs) << ',' << num(r.optMs) << '\n';
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

void writeTimingCsv(const std::string& path, const PhaseTotals& phases) {
  auto out = openOut(path);
  out << "phase,total_ms\n";
  out << "selection," << num(phases.selectMs) << '\n';
  out << "cache_refresh," << num(phases.refreshMs) << '\n';
  out << "forward," << num(phases.forwardMs) << '\n';
  out << "backward," << num(phases.backwardMs) << '\n';
  out << "optimizer," << num(phases.optimizerMs) << '\n';
  out << "training_total," << num(phases.trainingSeconds() * 1000.0) << '\n';
  out << "evaluation_excluded," << num(phases.evalMs) << '\n';
  out << "warmup_excluded," << num(phases.warmupMs) << '\n';
}

void writeTargetsCsv(const std::string& path, const std::vector<TargetCrossing>& crossings) {
  auto out = openOut(path);
  out << "target_db,iteration,elapsed_s\n";
  for (const auto& c : crossings) {
    out << num(c.targetDb) << ',';
    if (c.iteration >= 0)
      out << c.iteration << ',' << num(c.elapsedS);
    else
      out << ',';
    out << '\n';
  }
}

void writeRunArtifacts(const TrainingRun& run, RunRecord& record) {
  const ExperimentConfig& config = run.config();
  fs::create_directories(config.outputDir);
  const fs::path dir(config.outputDir);

  record.runCsvPath = (dir / "run.csv").string();
  writeRunCsv(record.runCsvPath, record);
  writeTimingCsv((dir / "timing.csv").string(), record.phases);
  writeTargetsCsv((dir / "targets.csv").string(), record.crossings);
  openOut((dir / "config.txt").string()) << serializeConfig(run.config());
  if (record.aborted) {
    openOut((dir / "ABORTED").string()) << record.abortReason << '\n';
    return;
  }

  const Signal& signal = run.signal();
  if (run.lastEvalPredictions().rows() == signal.coordCount()) {
    if (signal.grid.rank == 2) {
      record.reconstructionPath = (dir / "reconstruction.png").string();
      writePng(record.reconstructionPath, imageFromAttrs(signal.grid, run.lastEvalPredictions()));
    } else {
      record.reconstructionPath = (dir / "reconstruction.wav").string();
      writeWav(record.reconstructionPath,
               audioFromAttrs(signal.grid, run.lastEvalPredictions(),
                              config.source.audioSampleRate));
    }
  }
  record.checkpointPath = (dir / "model.ckpt").string();
  saveCheckpoint(record.checkpointPath, run.model());
}

void writeComparisonCsv(const std::string& path, const ComparisonTable& table) {
  auto out = openOut(path);
  out << "strategy,seed";
  for (int cp : table.checkpoints) out << ",psnr_" << cp << ",ssim_" << cp;
  out << ",total_s\n";
  for (const auto& row : table.rows) {
    out << row.label << ',' << row.seed;
    for (std::size_t i = 0; i < table.checkpoints.size(); ++i)
      out << ',' << num(row.psnrAt[i]) << ',' << num(row.ssimAt[i]);
    out << ',' << num(row.aborted ? std::nan("") : row.totalSeconds);
    if (row.aborted) out << ",aborted";
    out << '\n';
  }
}

void writeTimeToTargetCsv(const std::string& path, const ComparisonTable& table) {
  auto out = openOut(path);
  out << "strategy,seed,target_db,iteration,elapsed_s\n";
  for (const auto& row : table.rows)
    for (const auto& c : row.crossings) {
      out << row.label << ',' << row.seed << ',' << num(c.targetDb) << ',';
      if (c.iteration >= 0)
        out << c.iteration << ',' << num(c.elapsedS);
      else
        out << ',';
      out << '\n';
    }
}

}  // namespace evos
