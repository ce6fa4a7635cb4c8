#pragma once

#include <dpg/env/rollout.hpp>

#include <vector>

namespace dpg {

// R_t = r_t + gamma R_{t+1}, seeded with `bootstrap_value` when the
// trajectory was truncated and 0 when it terminated. Uses the learner's rewards.
Vector discounted_returns(const Trajectory& trajectory, double gamma, double bootstrap_value);

// V(s_t) for every transition plus the tail value of every trajectory.
struct BatchValues {
  Vector values;
  std::vector<double> bootstrap;
};

BatchValues stored_values(const RolloutBatch& batch);
BatchValues evaluate_values(const ValueFunction& vf, const RolloutBatch& batch);
BatchValues zero_values(const RolloutBatch& batch);

struct NormalizedAdvantages {
  Vector values;
  bool degenerate = false;  // zero spread: values are all zero
};

// (A - mean) / (std + 1e-8) with the population std.
NormalizedAdvantages normalize_advantages(const Vector& advantages);

struct AdvantageSet {
  Vector returns;
  Vector advantages;
  Vector value_targets;  // V_old(s_t) + A_t
  Vector normalized;
  bool degenerate = false;
};

// delta_t = r_t + gamma V(s_{t+1}) - V(s_t); A_t = sum_l (gamma lambda)^l delta_{t+l}.
AdvantageSet gae_advantages(const RolloutBatch& batch, const BatchValues& values, double gamma,
                            double lambda);
AdvantageSet gae_advantages(const RolloutBatch& batch, double gamma, double lambda);

// Flattened view consumed by the update rules.
struct TrainingBatch {
  Matrix states;
  Matrix actions;
  Vector old_log_probs;
  Vector advantages;  // what the surrogate weights ratios with (normalized)
  Vector old_values;
  Vector value_targets;
  Vector returns;

  Index size() const { return states.cols(); }
  TrainingBatch subset(const std::vector<Index>& indices) const;
};

TrainingBatch make_training_batch(const RolloutBatch& batch, const AdvantageSet& adv);

}  // namespace dpg
