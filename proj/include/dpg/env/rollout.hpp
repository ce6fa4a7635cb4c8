#pragma once

#include <dpg/algo/preprocessing.hpp>
#include <dpg/env/environment.hpp>
#include <dpg/policy/gaussian_policy.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace dpg {

struct Transition {
  Vector state;       // policy input (after preprocessing)
  Vector action;      // unclipped sample; the environment clips internally
  double reward = 0.0;         // environment reward
  double scaled_reward = 0.0;  // reward seen by the learner
  Vector next_state;
  bool done = false;  // episode boundary: termination or time limit
  double log_prob = 0.0;
  double value_pred = 0.0;
};

struct Trajectory {
  std::vector<Transition> transitions;
  double total_reward = 0.0;  // sum of environment rewards
  // Ended without physical termination (time limit or pair budget), so the
  // tail is bootstrapped with V(next_state).
  bool truncated = false;
  bool complete = false;  // reached termination or the time limit
  double bootstrap_value = 0.0;

  Index size() const { return static_cast<Index>(transitions.size()); }
};

struct RolloutBatch {
  std::vector<Trajectory> trajectories;
  Index pair_count = 0;
  std::string policy_snapshot_id;

  // Mean total reward over complete episodes; falls back to all trajectories
  // when the budget cut the only one.
  double mean_episode_reward() const;
  std::vector<double> episode_rewards() const;
  Matrix states() const;
  Matrix actions() const;
};

// Runs episodes until exactly `pair_budget` pairs are collected, cutting the
// last episode short if needed. Episodes hitting max_episode_length end with
// done = true but stay bootstrapped. When `value_fn` is null the value
// predictions are zero. The
// preprocessor, when given, is advanced (unless frozen).
RolloutBatch collect_rollouts(const EnvSpec& spec, const GaussianPolicy& policy,
                              const ValueFunction* value_fn, Index pair_budget,
                              std::uint64_t seed, Preprocessor* preprocessor = nullptr);

// Rewrites value_pred and bootstrap_value with `vf`.
void assign_value_predictions(RolloutBatch& batch, const ValueFunction* vf);

}  // namespace dpg
