#include <dpg/diagnostics/landscape.hpp>

#include <dpg/algo/objectives.hpp>
#include <dpg/parallel.hpp>

#include <cmath>

namespace dpg {

std::vector<double> linspace(double low, double high, int count) {
  if (count < 1) throw InvalidArgument("linspace: count must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        count == 1 ? low : low + (high - low) * static_cast<double>(i) / (count - 1);
  }
  return out;
}

IntervalEstimate estimate_true_reward(const Agent& agent, const AgentConfig& config,
                                      const GaussianPolicy& policy, Index pairs,
                                      std::uint64_t seed) {
  Preprocessor frozen = agent.preprocessor.frozen();
  const RolloutBatch batch = collect_rollouts(config.env, policy, nullptr, pairs, seed, &frozen);
  const std::vector<double> rewards = batch.episode_rewards();
  return bootstrap_mean(rewards, 1000, derive_seed(seed, 7));
}

LandscapeGrid landscape_scan(const Agent& agent, const AgentConfig& config,
                             const ParamVector& update_step, const LandscapeOptions& options,
                             int checkpoint_iteration, std::uint64_t seed) {
  if (update_step.size() != agent.policy.params.size()) {
    throw InvalidArgument("landscape_scan: update step has the wrong length");
  }
  if (options.step_axis.empty() || options.random_axis.empty()) {
    throw InvalidArgument("landscape_scan: empty axis");
  }
  LandscapeGrid grid;
  grid.checkpoint_iteration = checkpoint_iteration;
  grid.step_axis = options.step_axis;
  grid.random_axis = options.random_axis;

  Rng rng(derive_seed(seed, 3));
  std::normal_distribution<double> normal;
  grid.random_direction = ParamVector(update_step.size());
  for (Index i = 0; i < update_step.size(); ++i) grid.random_direction(i) = normal(rng);
  grid.random_direction *= 2.0 / grid.random_direction.norm();

  const RolloutBatch fixed = sample_batch(agent, config, options.surrogate_pairs, derive_seed(seed, 1));
  const TrainingBatch surrogate_batch = prepare_batch(config, fixed);

  const std::size_t ns = grid.step_axis.size();
  const std::size_t nr = grid.random_axis.size();
  grid.cells.resize(ns * nr);
  const int workers = options.workers > 0 ? options.workers : default_workers();
  parallel_for(grid.cells.size(), workers, [&](std::size_t item) {
    LandscapeCell& cell = grid.cells[item];
    cell.step = grid.step_axis[item / nr];
    cell.random = grid.random_axis[item % nr];
    GaussianPolicy moved = agent.policy;
    moved.params += cell.step * update_step + cell.random * grid.random_direction;
    double s = surrogate_and_grad(moved, surrogate_batch, false, 0.0).value;
    if (!std::isfinite(s)) {
      cell.flagged = true;
      s = std::isnan(s) ? options.value_cap : std::copysign(options.value_cap, s);
    } else if (std::abs(s) > options.value_cap) {
      cell.flagged = true;
      s = std::copysign(options.value_cap, s);
    }
    cell.surrogate = s;
    cell.true_reward = estimate_true_reward(agent, config, moved, options.true_pairs, derive_seed(seed, 2));
    cell.pairs = options.true_pairs;
  });
  return grid;
}

}  // namespace dpg
