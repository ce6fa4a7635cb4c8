#pragma once

#include <dpg/harness/run.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dpg {

using AxisSetting = std::array<bool, OptimizationToggles::kAblationAxes>;

// Every on/off combination of the free ablation axes; frozen axes keep their
// value. Ordered by ablation index.
std::vector<AxisSetting> ablation_configurations(const ExperimentConfig& base);

struct AblationRun {
  int config_index = 0;
  AxisSetting axes{};
  double lr = 0.0;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::completed;
  double final_reward = 0.0;
  std::string run_dir;
  std::string steps_csv;  // path, empty when files are not written
};

struct SelectedAgent {
  int config_index = 0;
  AxisSetting axes{};
  double lr = 0.0;
  std::uint64_t seed = 0;
  double final_reward = 0.0;
};

struct TogglePartition {
  int axis = 0;
  bool on = false;
  std::vector<int> agents;  // indices into AblationSummary::selected
  std::vector<double> rewards;
};

struct AblationSummary {
  std::string config_hash;
  int configuration_count = 0;
  std::vector<AblationRun> runs;
  std::vector<SelectedAgent> selected;
  std::vector<TogglePartition> partitions;  // (axis, off) then (axis, on) per axis
  std::array<double, OptimizationToggles::kAblationAxes> axis_effect{};  // mean(on) - mean(off)
  std::vector<std::string> warnings;
  std::string output_dir;  // empty when nothing was written
};

// Trains every (configuration, lr, seed) of a PPO base config, picks per
// configuration the lr with the best mean final reward over seeds, and
// partitions the selected agents by each axis.
AblationSummary run_ablation(const ExperimentConfig& base, int workers = 0, bool write_files = true);

std::string ablation_runs_csv(const AblationSummary& summary);
std::string ablation_selected_csv(const AblationSummary& summary);

}  // namespace dpg
