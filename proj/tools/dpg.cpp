// Command-line front end: training, ablations, diagnostics, plotting, replay.
#include <dpg/harness/reports.hpp>
#include <dpg/harness/io.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace dpg;

namespace {

struct ExperimentFlags {
  std::string config_path;
  std::optional<std::string> algorithm;
  std::optional<std::string> env;
  std::optional<int> iterations;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> output;
  std::optional<int> pairs;
  std::optional<double> policy_lr;
  std::optional<double> value_lr;
  std::vector<double> lr_grid;
  std::optional<int> cadence;
  std::map<std::string, std::string> toggles;
  std::vector<std::string> freeze;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON experiment config file")->check(CLI::ExistingFile);
    app->add_option("--algorithm", algorithm, "ppo, ppo_m or trpo");
    app->add_option("--env", env, "point_mass, pendulum or cartpole_continuous");
    app->add_option("--iterations", iterations, "training iterations");
    app->add_option("--seeds", seeds, "seeds")->delimiter(',');
    app->add_option("--output", output, "output directory");
    app->add_option("--pairs", pairs, "state-action pairs per iteration");
    app->add_option("--policy-lr", policy_lr, "policy learning rate");
    app->add_option("--value-lr", value_lr, "value learning rate");
    app->add_option("--lr-grid", lr_grid, "ablation learning rates")->delimiter(',');
    app->add_option("--cadence", cadence, "diagnostics and checkpoint cadence");
    for (const char* name : {"value-clipping", "reward-scaling", "orthogonal-init", "lr-annealing",
                             "obs-normalization"}) {
      app->add_option(std::string("--") + name, toggles[name], std::string(name) + " on|off")
          ->check(CLI::IsMember({"on", "off"}));
    }
    app->add_option("--freeze", freeze, "ablation axis=on|off held fixed")->delimiter(',');
  }

  ExperimentConfig build() const {
    ExperimentConfig c;
    if (!config_path.empty()) {
      c = load_config(config_path);
      if (algorithm || env) {
        const Algorithm a = algorithm ? parse_algorithm(*algorithm) : c.agent.algorithm;
        const EnvName e = env ? parse_env_name(*env) : c.agent.env.name;
        const ExperimentConfig fresh = ExperimentConfig::defaults(a, e);
        if (algorithm) { c.agent.algorithm = a; c.agent.toggles = fresh.agent.toggles; }
        if (env) c.agent.env = fresh.agent.env;
      }
    } else {
      c = ExperimentConfig::defaults(algorithm ? parse_algorithm(*algorithm) : Algorithm::ppo,
                                     env ? parse_env_name(*env) : EnvName::point_mass);
    }
    if (iterations) c.agent.total_iterations = *iterations;
    if (!seeds.empty()) c.seeds = seeds;
    if (output) c.output_dir = *output;
    if (pairs) { c.agent.ppo.pairs_per_iter = *pairs; c.agent.trpo.pairs_per_iter = *pairs; }
    if (policy_lr) c.agent.ppo.policy_lr = *policy_lr;
    if (value_lr) { c.agent.ppo.value_lr = *value_lr; c.agent.trpo.value_lr = *value_lr; }
    if (!lr_grid.empty()) c.lr_grid = lr_grid;
    if (cadence) c.diagnostics_cadence = *cadence;
    auto& t = c.agent.toggles;
    const std::map<std::string, bool*> flags{{"value-clipping", &t.value_clipping},
                                             {"reward-scaling", &t.reward_scaling},
                                             {"orthogonal-init", &t.orthogonal_init},
                                             {"lr-annealing", &t.lr_annealing},
                                             {"obs-normalization", &t.obs_normalization}};
    for (const auto& [name, value] : toggles) {
      if (!value.empty()) *flags.at(name) = value == "on";
    }
    for (const auto& item : freeze) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InvalidArgument("--freeze expects axis=on|off, got '" + item + "'");
      const std::string axis = item.substr(0, eq);
      const std::string value = item.substr(eq + 1);
      if (value != "on" && value != "off") throw InvalidArgument("--freeze value must be on or off");
      bool found = false;
      for (int i = 0; i < OptimizationToggles::kAblationAxes; ++i) {
        if (axis == OptimizationToggles::kAxisNames[static_cast<std::size_t>(i)]) {
          c.frozen_axes[static_cast<std::size_t>(i)] = value == "on";
          found = true;
        }
      }
      if (!found) throw InvalidArgument("unknown ablation axis '" + axis + "'");
    }
    c.validate();
    return c;
  }
};

Json to_summary(const RunRecord& r) {
  const double final_reward = r.final_reward(r.config.final_reward_window);
  return {{"seed", r.seed},
          {"status", to_string(r.status)},
          {"failure", r.failure},
          {"iterations", r.reports.size()},
          {"final_reward", std::isfinite(final_reward) ? Json(final_reward) : Json(nullptr)},
          {"run_dir", r.run_dir}};
}

std::vector<TrustRegionRow> trust_rows_from_csv(const std::string& text) {
  const CsvTable t = parse_csv(text);
  std::vector<TrustRegionRow> rows;
  for (const auto& f : t.rows) {
    TrustRegionRow r;
    r.iteration = std::stoi(f.at(t.column("iteration")));
    r.split = f.at(t.column("split")) == "train" ? Split::train : Split::heldout;
    r.mean_reward = std::stod(f.at(t.column("mean_reward")));
    r.max_ratio = std::stod(f.at(t.column("max_ratio")));
    r.mean_kl = std::stod(f.at(t.column("mean_kl")));
    r.max_kl = std::stod(f.at(t.column("max_kl")));
    r.ratio_threshold = std::stod(f.at(t.column("ratio_threshold")));
    r.kl_delta = std::stod(f.at(t.column("kl_delta")));
    rows.push_back(r);
  }
  return rows;
}

void print(const Json& j) { std::cout << j.dump(2) << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep policy gradient laboratory"};
  app.require_subcommand(1);

  ExperimentFlags train_flags;
  auto* train = app.add_subcommand("train", "train agents for every configured seed");
  train_flags.attach(train);

  ExperimentFlags ablate_flags;
  auto* ablate = app.add_subcommand("ablate", "run the on/off grid of the four ablation axes");
  ablate_flags.attach(ablate);

  ExperimentFlags config_flags;
  auto* config_cmd = app.add_subcommand("config", "print the resolved experiment config");
  config_flags.attach(config_cmd);

  auto* diagnose = app.add_subcommand("diagnose", "measurements at a saved checkpoint");
  diagnose->require_subcommand(1);
  std::string checkpoint_path;
  std::string diag_output = "diagnostics";
  std::uint64_t diag_seed = 0;
  auto add_common = [&](CLI::App* sub, bool needs_checkpoint) {
    if (needs_checkpoint) {
      sub->add_option("--checkpoint", checkpoint_path, "checkpoint JSON")->required()->check(CLI::ExistingFile);
    }
    sub->add_option("--output", diag_output, "output directory");
    sub->add_option("--seed", diag_seed, "measurement seed");
  };
  GradientQualityOptions gq;
  auto* d_grad = diagnose->add_subcommand("gradients", "gradient estimate quality versus budget");
  add_common(d_grad, true);
  d_grad->add_option("--budgets", gq.budgets, "pair budgets")->delimiter(',');
  d_grad->add_option("--repeats", gq.repeats, "estimates per budget");
  d_grad->add_option("--reference", gq.reference_budget, "pairs for the reference gradient");
  d_grad->add_flag("--shared-seed", gq.shared_seed, "reuse one rollout seed for every estimate");

  int step_repeats = 100;
  Index kl_states = 1000;
  auto* d_steps = diagnose->add_subcommand("steps", "variance of full update steps");
  add_common(d_steps, true);
  d_steps->add_option("--repeats", step_repeats, "update steps");
  d_steps->add_option("--kl-states", kl_states, "states for pairwise KL");

  std::optional<Index> value_pairs;
  auto* d_value = diagnose->add_subcommand("value", "value prediction MRE on train and heldout pairs");
  add_common(d_value, true);
  d_value->add_option("--pairs", value_pairs, "pairs per split");

  std::vector<Index> baseline_budgets{2000, 20000};
  int baseline_repeats = 10;
  TrueValueOptions true_value;
  auto* d_base = diagnose->add_subcommand("baselines", "gradient quality under agent, true and zero baselines");
  add_common(d_base, true);
  d_base->add_option("--budgets", baseline_budgets, "pair budgets")->delimiter(',');
  d_base->add_option("--repeats", baseline_repeats, "estimates per budget");
  d_base->add_option("--true-pairs", true_value.pair_budget, "pairs for fitting the true value function");
  d_base->add_option("--true-epochs", true_value.epochs, "epochs for fitting the true value function");

  LandscapeOptions land;
  int land_steps = 16;
  int land_randoms = 21;
  auto* d_land = diagnose->add_subcommand("landscape", "surrogate and true reward around a checkpoint");
  add_common(d_land, true);
  d_land->add_option("--step-points", land_steps, "grid points along the update step");
  d_land->add_option("--random-points", land_randoms, "grid points along the random direction");
  d_land->add_option("--surrogate-pairs", land.surrogate_pairs, "pairs in the fixed surrogate batch");
  d_land->add_option("--true-pairs", land.true_pairs, "pairs per true-reward cell");

  auto* d_trust = diagnose->add_subcommand("trust-region", "ratio and KL of one update on train and heldout pairs");
  add_common(d_trust, true);

  double probe_eps = 0.2;
  double probe_adv = 1.0;
  auto* d_probe = diagnose->add_subcommand("optima-probe", "plateaus of the clipped objective for one pair");
  add_common(d_probe, false);
  d_probe->add_option("--eps", probe_eps, "clip epsilon");
  d_probe->add_option("--advantage", probe_adv, "advantage (sign selects the case)");

  std::string plot_dir;
  std::optional<std::string> plot_output;
  auto* plot = app.add_subcommand("plot", "render SVG figures for a training run directory");
  plot->add_option("run_dir", plot_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  plot->add_option("--output", plot_output, "output directory (default: the run directory)");

  std::string replay_dir;
  std::string replay_scratch;
  auto* replay = app.add_subcommand("replay", "re-run a recorded run and compare its CSVs byte for byte");
  replay->add_option("run_dir", replay_dir, "run directory")->required()->check(CLI::ExistingDirectory);
  replay->add_option("--scratch", replay_scratch, "where the replay is written");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << Json{{"error", {{"type", "usage"}, {"message", e.what()}}}}.dump() << std::endl;
    return 2;
  }

  try {
    if (*config_cmd) {
      print(to_json(config_flags.build()));
    } else if (*train) {
      const ExperimentConfig config = train_flags.build();
      Json out = {{"config_hash", config_hash(config)}, {"runs", Json::array()}};
      bool ok = true;
      for (auto seed : config.seeds) {
        const RunRecord record = run_training(config, seed);
        emit_outputs({make_output(record)}, record.run_dir, {false, false, true});
        out["runs"].push_back(to_summary(record));
        ok = ok && record.status == RunStatus::completed;
      }
      print(out);
      return ok ? 0 : 1;
    } else if (*ablate) {
      const ExperimentConfig config = ablate_flags.build();
      const AblationSummary summary = run_ablation(config);
      emit_outputs({make_output(summary)}, summary.output_dir, {false, false, true});
      Json effects = Json::object();
      for (int a = 0; a < OptimizationToggles::kAblationAxes; ++a) {
        const double e = summary.axis_effect[static_cast<std::size_t>(a)];
        effects[OptimizationToggles::kAxisNames[static_cast<std::size_t>(a)]] = std::isfinite(e) ? Json(e) : Json(nullptr);
      }
      print({{"output_dir", summary.output_dir}, {"runs", summary.runs.size()},
             {"selected", summary.selected.size()}, {"axis_effect", effects}, {"warnings", summary.warnings}});
    } else if (*diagnose) {
      std::vector<OutputItem> items;
      if (*d_probe) {
        items.push_back(make_output(ppo_optima_probe(probe_eps, probe_adv, optima_probe_grid(probe_eps)),
                                    "probe"));
      } else {
        const Checkpoint cp = load_checkpoint(checkpoint_path);
        const AgentConfig& ac = cp.config;
        const Agent& agent = cp.agent;
        const std::string& hash = cp.config_hash;
        const int it = cp.iteration;
        if (*d_grad) {
          items.push_back(make_output(gradient_quality_scan(agent, ac, it, gq, diag_seed), hash));
        } else if (*d_steps) {
          items.push_back(make_output(step_variance_scan(agent, ac, it, step_repeats, diag_seed, false, kl_states), hash));
        } else if (*d_value) {
          const Index pairs = value_pairs.value_or(ac.pairs_per_iter());
          AgentConfig cfg = ac;
          if (cfg.algorithm == Algorithm::trpo) cfg.trpo.pairs_per_iter = static_cast<int>(pairs);
          else cfg.ppo.pairs_per_iter = static_cast<int>(pairs);
          const Iteration step = run_iteration(agent, cfg, it, derive_seed(diag_seed, 1));
          const RolloutBatch heldout = sample_batch(agent, cfg, pairs, derive_seed(diag_seed, 2));
          items.push_back(make_output(
              std::vector<ValueQualityReport>{
                  value_quality(step.agent.value, step.batch, cfg.gamma(), cfg.lambda(), Split::train, it),
                  value_quality(step.agent.value, heldout, cfg.gamma(), cfg.lambda(), Split::heldout, it)},
              hash));
        } else if (*d_base) {
          const ValueFunction vf = fit_true_value(agent, ac, true_value, derive_seed(diag_seed, 1));
          items.push_back(make_output(baseline_variance_comparison(agent, ac, vf, baseline_budgets, baseline_repeats,
                                                                   it, derive_seed(diag_seed, 2)),
                                      hash));
        } else if (*d_land) {
          land.step_axis = linspace(-1.0, 2.0, land_steps);
          land.random_axis = linspace(-1.0, 1.0, land_randoms);
          const Iteration step = run_iteration(agent, ac, it, derive_seed(diag_seed, 1));
          const ParamVector update = step.agent.policy.params - agent.policy.params;
          items.push_back(make_output(landscape_scan(agent, ac, update, land, it, derive_seed(diag_seed, 2)), hash));
        } else if (*d_trust) {
          const Iteration step = run_iteration(agent, ac, it, derive_seed(diag_seed, 1));
          const RolloutBatch heldout = sample_batch(agent, ac, ac.pairs_per_iter(), derive_seed(diag_seed, 2));
          std::vector<TrustRegionRow> rows{
              trust_region_metrics(agent.policy, step.agent.policy, step.training, Split::train, it,
                                   step.report.mean_reward, ac.ppo.clip_eps, ac.trpo.kl_delta),
              trust_region_metrics(agent.policy, step.agent.policy, prepare_batch(ac, heldout), Split::heldout, it,
                                   heldout.mean_episode_reward(), ac.ppo.clip_eps, ac.trpo.kl_delta)};
          items.push_back(make_output(rows, hash, it));
        }
      }
      print({{"files", emit_outputs(items, diag_output)}});
    } else if (*plot) {
      const Json manifest = [&] {
        for (const auto& entry : fs::directory_iterator(plot_dir)) {
          const std::string name = entry.path().filename().string();
          if (name.rfind("manifest_", 0) == 0) return Json::parse(read_file(entry.path().string()));
        }
        throw InvalidArgument("plot: no manifest in '" + plot_dir + "'");
      }();
      RunRecord record;
      record.config = config_from_json(manifest.at("config"));
      record.config_hash = manifest.at("config_hash").get<std::string>();
      record.seed = manifest.at("seed").get<std::uint64_t>();
      record.status = manifest.at("status").get<std::string>() == "completed" ? RunStatus::completed : RunStatus::failed;
      const std::string steps = read_file((fs::path(plot_dir) / manifest.at("steps_csv").get<std::string>()).string());
      const auto rewards = mean_rewards_from_csv(steps);
      for (std::size_t i = 0; i < rewards.size(); ++i) {
        StepReport r;
        r.iteration = static_cast<int>(i);
        r.mean_reward = rewards[i];
        record.reports.push_back(r);
      }
      const auto rows = trust_rows_from_csv(
          read_file((fs::path(plot_dir) / manifest.at("trust_region_csv").get<std::string>()).string()));
      std::vector<OutputItem> items{make_output(record)};
      if (!rows.empty()) items.push_back(make_output(rows, record.config_hash, static_cast<int>(rewards.size())));
      print({{"files", emit_outputs(items, plot_output.value_or(plot_dir), {false, false, true})}});
    } else if (*replay) {
      const std::string scratch =
          replay_scratch.empty() ? (fs::path(replay_dir) / "replay").string() : replay_scratch;
      const ReplayResult r = replay_run(replay_dir, scratch);
      print({{"identical", r.identical}, {"compared", r.compared}, {"difference", r.difference},
             {"replay_dir", r.replay_dir}});
      return r.identical ? 0 : 3;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << Json{{"error", {{"type", "invalid_argument"}, {"message", e.what()}}}}.dump() << std::endl;
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << Json{{"error", {{"type", "numerical"}, {"message", e.what()}, {"index", e.index()}}}}.dump()
              << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", {{"type", "runtime"}, {"message", e.what()}}}}.dump() << std::endl;
    return 1;
  }
  return 0;
}
