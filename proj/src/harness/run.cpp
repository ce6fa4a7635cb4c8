#include <dpg/harness/run.hpp>

#include <dpg/harness/io.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>

namespace dpg {

namespace fs = std::filesystem;

std::string to_string(RunStatus status) {
  return status == RunStatus::completed ? "completed" : "failed";
}

double RunRecord::final_reward(int window) const {
  if (reports.empty()) return std::nan("");
  const auto n = static_cast<int>(reports.size());
  const int k = std::min(std::max(window, 1), n);
  double sum = 0.0;
  for (int i = n - k; i < n; ++i) sum += reports[static_cast<std::size_t>(i)].mean_reward;
  return sum / k;
}

std::string run_dir_name(const ExperimentConfig& config, std::uint64_t seed) {
  return to_string(config.agent.algorithm) + "_" + to_string(config.agent.env.name) + "_" +
         config_hash(config) + "_seed" + std::to_string(seed);
}

namespace {

std::string sanitize(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

bool finite_report(const StepReport& r) {
  return std::isfinite(r.mean_reward) && std::isfinite(r.surrogate_before) &&
         std::isfinite(r.surrogate_after) && std::isfinite(r.mean_kl) && std::isfinite(r.max_kl) &&
         std::isfinite(r.max_ratio);
}

bool finite_agent(const Agent& a) {
  return a.policy.params.allFinite() && a.value.params.allFinite();
}

}  // namespace

std::string step_reports_csv(const std::vector<StepReport>& reports) {
  CsvWriter csv({"iteration", "mean_reward", "surrogate_before", "surrogate_after", "mean_kl",
                 "max_kl", "max_ratio", "accepted_step_scale", "params_before", "params_after",
                 "policy_gradient_steps", "step_rejected", "note"});
  for (const auto& r : reports) {
    csv.cell(r.iteration).cell(r.mean_reward).cell(r.surrogate_before).cell(r.surrogate_after)
        .cell(r.mean_kl).cell(r.max_kl).cell(r.max_ratio).cell(r.accepted_step_scale)
        .cell(r.params_before).cell(r.params_after).cell(r.policy_gradient_steps)
        .cell(r.step_rejected).cell(sanitize(r.note));
    csv.end_row();
  }
  return csv.str();
}

std::string trust_region_csv(const std::vector<TrustRegionRow>& rows) {
  CsvWriter csv({"iteration", "split", "mean_reward", "max_ratio", "mean_kl", "max_kl",
                 "ratio_threshold", "kl_delta"});
  for (const auto& r : rows) {
    csv.cell(r.iteration).cell(to_string(r.split)).cell(r.mean_reward).cell(r.max_ratio)
        .cell(r.mean_kl).cell(r.max_kl).cell(r.ratio_threshold).cell(r.kl_delta);
    csv.end_row();
  }
  return csv.str();
}

std::vector<double> mean_rewards_from_csv(const std::string& csv_text) {
  const CsvTable table = parse_csv(csv_text);
  const std::size_t col = table.column("mean_reward");
  std::vector<double> out;
  for (const auto& row : table.rows) out.push_back(std::stod(row.at(col)));
  return out;
}

RunRecord run_training(const ExperimentConfig& config, std::uint64_t seed, const RunOptions& options) {
  config.validate();
  const AgentConfig& ac = config.agent;
  RunRecord record;
  record.config = config;
  record.config_hash = config_hash(config);
  record.seed = seed;
  const std::string& hash = record.config_hash;
  if (options.write_files) {
    record.run_dir = (fs::path(config.output_dir) / run_dir_name(config, seed)).string();
    ensure_writable_dir(record.run_dir);
    write_file_atomic((fs::path(record.run_dir) / "config.json").string(), to_json(config).dump(2) + "\n");
  }
  const auto started = std::chrono::steady_clock::now();

  int last_checkpoint = -1;
  auto checkpoint = [&](const Agent& agent, int iteration) {
    last_checkpoint = iteration;
    if (!options.write_files) return;
    const std::string path = (fs::path(record.run_dir) /
                              ("checkpoint_" + hash + "_iter" + std::to_string(iteration) + ".json")).string();
    save_checkpoint({ac, hash, seed, iteration, agent}, path);
    record.checkpoints.push_back(path);
  };

  Agent agent = make_agent(ac, seed);
  checkpoint(agent, 0);
  const double clip_eps = ac.ppo.clip_eps;
  for (int it = 0; it < ac.total_iterations; ++it) {
    try {
      Iteration step = run_iteration(agent, ac, it, seed);
      if (!finite_agent(step.agent) || !finite_report(step.report)) {
        throw NumericalError("non-finite parameters or statistics at iteration " + std::to_string(it));
      }
      if (options.measure_trust_region && it % config.diagnostics_cadence == 0) {
        record.trust_region.push_back(trust_region_metrics(agent.policy, step.agent.policy, step.training,
                                                           Split::train, it, step.report.mean_reward,
                                                           clip_eps, ac.trpo.kl_delta));
        const RolloutBatch heldout =
            sample_batch(agent, ac, ac.pairs_per_iter(), derive_seed(seed, static_cast<std::uint64_t>(it), 3));
        record.trust_region.push_back(trust_region_metrics(agent.policy, step.agent.policy,
                                                           prepare_batch(ac, heldout), Split::heldout, it,
                                                           heldout.mean_episode_reward(), clip_eps,
                                                           ac.trpo.kl_delta));
      }
      agent = std::move(step.agent);
      record.reports.push_back(std::move(step.report));
    } catch (const NumericalError& e) {
      record.status = RunStatus::failed;
      record.failure = e.what();
      break;
    } catch (const InvalidArgument& e) {
      record.status = RunStatus::failed;
      record.failure = e.what();
      break;
    }
    const int done = it + 1;
    if (done % config.diagnostics_cadence == 0) checkpoint(agent, done);
  }
  const int completed = static_cast<int>(record.reports.size());
  if (completed != last_checkpoint) checkpoint(agent, completed);
  record.final_agent = agent;
  record.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  if (options.write_files) {
    const fs::path dir(record.run_dir);
    const std::string iter = "_iter" + std::to_string(completed);
    const std::string steps_name = "steps_" + hash + iter + ".csv";
    const std::string tr_name = "trust_region_" + hash + iter + ".csv";
    write_file_atomic((dir / steps_name).string(), step_reports_csv(record.reports));
    write_file_atomic((dir / tr_name).string(), trust_region_csv(record.trust_region));
    Json manifest = {{"config", to_json(config)},
                     {"config_hash", hash},
                     {"seed", seed},
                     {"status", to_string(record.status)},
                     {"failure", record.failure},
                     {"iterations_completed", completed},
                     {"wall_clock_seconds", record.wall_clock_seconds},
                     {"checkpoints", Json::array()},
                     {"steps_csv", steps_name},
                     {"trust_region_csv", tr_name},
                     {"final_policy_id", param_id(agent.policy.params)}};
    for (const auto& c : record.checkpoints) manifest["checkpoints"].push_back(fs::path(c).filename().string());
    write_file_atomic((dir / ("manifest_" + hash + ".json")).string(), manifest.dump(2) + "\n");
  }
  return record;
}

ReplayResult replay_run(const std::string& run_dir, const std::string& scratch_dir) {
  fs::path manifest_path;
  if (fs::is_directory(run_dir)) {
    for (const auto& entry : fs::directory_iterator(run_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("manifest_", 0) == 0 && entry.path().extension() == ".json") manifest_path = entry.path();
    }
  }
  if (manifest_path.empty()) throw InvalidArgument("replay: no manifest found in '" + run_dir + "'");
  Json manifest;
  try {
    manifest = Json::parse(read_file(manifest_path.string()));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("replay: malformed manifest: ") + e.what());
  }
  ExperimentConfig config = config_from_json(manifest.at("config"));
  const auto seed = manifest.at("seed").get<std::uint64_t>();
  config.output_dir = scratch_dir;
  const RunRecord replay = run_training(config, seed);

  ReplayResult result;
  result.replay_dir = replay.run_dir;
  result.identical = true;
  for (const char* key : {"steps_csv", "trust_region_csv"}) {
    const std::string name = manifest.at(key).get<std::string>();
    result.compared.push_back(name);
    const fs::path original = fs::path(run_dir) / name;
    const fs::path replayed = fs::path(replay.run_dir) / name;
    if (!fs::exists(replayed)) {
      result.identical = false;
      result.difference = name + ": missing in replay";
      break;
    }
    if (read_file(original.string()) != read_file(replayed.string())) {
      result.identical = false;
      result.difference = name + ": contents differ";
      break;
    }
  }
  return result;
}

}  // namespace dpg
