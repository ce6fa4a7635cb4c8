#pragma once

#include <dpg/diagnostics/trust_region.hpp>
#include <dpg/harness/checkpoint.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace dpg {

enum class RunStatus { completed, failed };
std::string to_string(RunStatus status);

struct RunRecord {
  ExperimentConfig config;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string run_dir;  // empty when nothing was written
  std::vector<StepReport> reports;
  std::vector<TrustRegionRow> trust_region;
  std::vector<std::string> checkpoints;
  double wall_clock_seconds = 0.0;
  RunStatus status = RunStatus::completed;
  std::string failure;
  Agent final_agent;  // last agent with finite state

  // Mean of the last `window` iterations' mean_reward.
  double final_reward(int window) const;
};

struct RunOptions {
  bool write_files = true;
  bool measure_trust_region = true;  // train and heldout metrics at the cadence
};

// collect -> advantages -> update for config.agent.total_iterations, fully
// determined by (config, seed). Checkpoints are taken at iteration 0, every
// diagnostics_cadence iterations and at the end.
RunRecord run_training(const ExperimentConfig& config, std::uint64_t seed,
                       const RunOptions& options = {});

std::string run_dir_name(const ExperimentConfig& config, std::uint64_t seed);

std::string step_reports_csv(const std::vector<StepReport>& reports);
std::string trust_region_csv(const std::vector<TrustRegionRow>& rows);

// Recomputes per-iteration mean rewards from a steps CSV.
std::vector<double> mean_rewards_from_csv(const std::string& csv_text);

struct ReplayResult {
  bool identical = false;
  std::vector<std::string> compared;  // file names checked
  std::string difference;             // first mismatch, if any
  std::string replay_dir;
};

// Re-runs the run recorded in `run_dir` into `scratch_dir` and compares the
// StepReport and trust-region CSVs byte for byte.
ReplayResult replay_run(const std::string& run_dir, const std::string& scratch_dir);

}  // namespace dpg
