#include <dpg/harness/ablation.hpp>

#include <dpg/harness/io.hpp>
#include <dpg/parallel.hpp>

#include <cmath>
#include <filesystem>
#include <limits>

namespace dpg {

namespace fs = std::filesystem;

namespace {

constexpr int kAxes = OptimizationToggles::kAblationAxes;

void add_axes(CsvWriter& csv, const AxisSetting& axes) {
  for (bool on : axes) csv.cell(on);
}

std::vector<std::string> with_axis_names(std::vector<std::string> head, std::vector<std::string> tail) {
  for (const char* name : OptimizationToggles::kAxisNames) head.emplace_back(name);
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

std::vector<AxisSetting> ablation_configurations(const ExperimentConfig& base) {
  std::vector<AxisSetting> out;
  for (int mask = 0; mask < (1 << kAxes); ++mask) {
    AxisSetting axes{};
    bool keep = true;
    for (int i = 0; i < kAxes; ++i) {
      axes[static_cast<std::size_t>(i)] = ((mask >> i) & 1) != 0;
      const auto& frozen = base.frozen_axes[static_cast<std::size_t>(i)];
      if (frozen && *frozen != axes[static_cast<std::size_t>(i)]) keep = false;
    }
    if (keep) out.push_back(axes);
  }
  return out;
}

AblationSummary run_ablation(const ExperimentConfig& base, int workers, bool write_files) {
  base.validate();
  if (base.agent.algorithm != Algorithm::ppo) {
    throw InvalidArgument("ablate: the base configuration must use the ppo algorithm");
  }
  AblationSummary summary;
  summary.config_hash = config_hash(base);
  const auto configs = ablation_configurations(base);
  summary.configuration_count = static_cast<int>(configs.size());
  if (write_files) {
    summary.output_dir = (fs::path(base.output_dir) / ("ablation_" + summary.config_hash)).string();
    ensure_writable_dir(summary.output_dir);
    write_file_atomic((fs::path(summary.output_dir) / "config.json").string(), to_json(base).dump(2) + "\n");
  }

  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (double lr : base.lr_grid) {
      for (auto seed : base.seeds) {
        AblationRun run;
        run.config_index = static_cast<int>(c);
        run.axes = configs[c];
        run.lr = lr;
        run.seed = seed;
        summary.runs.push_back(run);
      }
    }
  }

  parallel_for(summary.runs.size(), workers > 0 ? workers : default_workers(), [&](std::size_t i) {
    AblationRun& run = summary.runs[i];
    ExperimentConfig cfg = base;
    for (int a = 0; a < kAxes; ++a) cfg.agent.toggles.set_axis(a, run.axes[static_cast<std::size_t>(a)]);
    cfg.agent.ppo.policy_lr = run.lr;
    cfg.seeds = {run.seed};
    cfg.lr_grid = {run.lr};
    cfg.frozen_axes = {};
    if (write_files) cfg.output_dir = (fs::path(summary.output_dir) / "runs").string();
    RunOptions options;
    options.write_files = write_files;
    options.measure_trust_region = false;
    const RunRecord record = run_training(cfg, run.seed, options);
    run.status = record.status;
    run.final_reward = record.final_reward(base.final_reward_window);
    run.run_dir = record.run_dir;
    if (write_files) {
      run.steps_csv = (fs::path(record.run_dir) /
                       ("steps_" + record.config_hash + "_iter" + std::to_string(record.reports.size()) + ".csv"))
                          .string();
    }
  });

  for (std::size_t c = 0; c < configs.size(); ++c) {
    double best = -std::numeric_limits<double>::infinity();
    double best_lr = std::nan("");
    for (double lr : base.lr_grid) {
      double sum = 0.0;
      int n = 0;
      for (const auto& run : summary.runs) {
        if (run.config_index != static_cast<int>(c) || run.lr != lr) continue;
        if (run.status == RunStatus::failed || !std::isfinite(run.final_reward)) {
          summary.warnings.push_back("configuration " + std::to_string(c) + " lr " + format_double(lr) +
                                     " seed " + std::to_string(run.seed) + " failed; excluded");
          continue;
        }
        sum += run.final_reward;
        ++n;
      }
      if (n > 0 && sum / n > best) {
        best = sum / n;
        best_lr = lr;
      }
    }
    if (std::isnan(best_lr)) {
      summary.warnings.push_back("configuration " + std::to_string(c) + " has no successful runs");
      continue;
    }
    for (const auto& run : summary.runs) {
      if (run.config_index == static_cast<int>(c) && run.lr == best_lr && run.status == RunStatus::completed &&
          std::isfinite(run.final_reward)) {
        summary.selected.push_back({run.config_index, run.axes, run.lr, run.seed, run.final_reward});
      }
    }
  }

  for (int a = 0; a < kAxes; ++a) {
    double sums[2] = {0.0, 0.0};
    for (int on = 0; on <= 1; ++on) {
      TogglePartition part;
      part.axis = a;
      part.on = on != 0;
      for (std::size_t k = 0; k < summary.selected.size(); ++k) {
        if (summary.selected[k].axes[static_cast<std::size_t>(a)] == part.on) {
          part.agents.push_back(static_cast<int>(k));
          part.rewards.push_back(summary.selected[k].final_reward);
          sums[on] += summary.selected[k].final_reward;
        }
      }
      summary.partitions.push_back(part);
    }
    const auto& off_part = summary.partitions[summary.partitions.size() - 2];
    const auto& on_part = summary.partitions.back();
    summary.axis_effect[static_cast<std::size_t>(a)] =
        off_part.rewards.empty() || on_part.rewards.empty()
            ? std::nan("")
            : sums[1] / static_cast<double>(on_part.rewards.size()) -
                  sums[0] / static_cast<double>(off_part.rewards.size());
  }

  if (write_files) {
    const fs::path dir(summary.output_dir);
    write_file_atomic((dir / ("ablation_runs_" + summary.config_hash + ".csv")).string(), ablation_runs_csv(summary));
    write_file_atomic((dir / ("ablation_selected_" + summary.config_hash + ".csv")).string(),
                      ablation_selected_csv(summary));
    Json j = {{"config_hash", summary.config_hash},
              {"configuration_count", summary.configuration_count},
              {"run_count", summary.runs.size()},
              {"selected_count", summary.selected.size()},
              {"warnings", summary.warnings},
              {"axis_effect", Json::object()}};
    for (int a = 0; a < kAxes; ++a) {
      const double e = summary.axis_effect[static_cast<std::size_t>(a)];
      j["axis_effect"][OptimizationToggles::kAxisNames[static_cast<std::size_t>(a)]] =
          std::isfinite(e) ? Json(e) : Json(nullptr);
    }
    write_file_atomic((dir / ("ablation_summary_" + summary.config_hash + ".json")).string(), j.dump(2) + "\n");
  }
  return summary;
}

std::string ablation_runs_csv(const AblationSummary& summary) {
  CsvWriter csv(with_axis_names({"config_index"}, {"lr", "seed", "status", "final_reward", "steps_csv"}));
  for (const auto& r : summary.runs) {
    csv.cell(r.config_index);
    add_axes(csv, r.axes);
    csv.cell(r.lr).cell(std::to_string(r.seed)).cell(to_string(r.status)).cell(r.final_reward)
        .cell(fs::path(r.steps_csv).lexically_relative(summary.output_dir).string());
    csv.end_row();
  }
  return csv.str();
}

std::string ablation_selected_csv(const AblationSummary& summary) {
  CsvWriter csv(with_axis_names({"agent", "config_index"}, {"lr", "seed", "final_reward"}));
  for (std::size_t k = 0; k < summary.selected.size(); ++k) {
    const auto& s = summary.selected[k];
    csv.cell(static_cast<long long>(k)).cell(s.config_index);
    add_axes(csv, s.axes);
    csv.cell(s.lr).cell(std::to_string(s.seed)).cell(s.final_reward);
    csv.end_row();
  }
  return csv.str();
}

}  // namespace dpg
