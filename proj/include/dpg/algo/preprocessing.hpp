#pragma once

#include <dpg/algo/config.hpp>
#include <dpg/numerics/stats.hpp>

#include <vector>

namespace dpg {

// Rolling discounted return and its running statistics.
struct RewardScaler {
  double running_return = 0.0;
  RunningStats stats;

  void start_episode() { running_return = 0.0; }
  friend bool operator==(const RewardScaler&, const RewardScaler&) = default;
};

struct ScaledReward {
  double reward = 0.0;
  RewardScaler state;
};

// R <- gamma R + r; stats <- add(stats, R); return r / std(stats). The mean is
// never subtracted. Falls back to a unit denominator while std is zero or
// fewer than two returns were seen.
ScaledReward reward_scale_update(RewardScaler state, double reward, double gamma);

// Scales with the current statistics without recording anything.
double reward_scale_frozen(const RewardScaler& state, double reward);

// Per-dimension (x - mean) / std with the statistics updated first, then
// clipping. Identity when both toggles are off.
Vector preprocess_observation(std::vector<RunningStats>& obs_stats, const Vector& obs,
                              const OptimizationToggles& toggles);

// Same transform with frozen statistics.
Vector preprocess_observation_frozen(const std::vector<RunningStats>& obs_stats, const Vector& obs,
                                     const OptimizationToggles& toggles);

// Rescales to `max_norm` when the l2 norm exceeds it.
ParamVector clip_global_norm(const ParamVector& grad, double max_norm);

// Observation and reward pipeline owned by an agent. A frozen preprocessor
// applies the transforms without updating any statistics.
class Preprocessor {
 public:
  Preprocessor() = default;
  Preprocessor(const OptimizationToggles& toggles, Index obs_dim, double gamma);

  Vector observation(const Vector& raw);
  double reward(double raw);
  void start_episode() { scaler_.start_episode(); }

  Preprocessor frozen() const;
  bool is_frozen() const { return frozen_; }

  const OptimizationToggles& toggles() const { return toggles_; }
  double gamma() const { return gamma_; }
  const std::vector<RunningStats>& obs_stats() const { return obs_stats_; }
  const RewardScaler& scaler() const { return scaler_; }
  std::vector<RunningStats>& obs_stats() { return obs_stats_; }
  RewardScaler& scaler() { return scaler_; }

  friend bool operator==(const Preprocessor&, const Preprocessor&) = default;

 private:
  OptimizationToggles toggles_;
  double gamma_ = 0.99;
  std::vector<RunningStats> obs_stats_;
  RewardScaler scaler_;
  bool frozen_ = false;
};

}  // namespace dpg
