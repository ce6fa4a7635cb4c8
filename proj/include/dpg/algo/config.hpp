#pragma once

#include <dpg/core.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace dpg {

struct ClipRange {
  double low = -10.0;
  double high = 10.0;

  friend bool operator==(const ClipRange&, const ClipRange&) = default;
};

// Switchboard for the implementation-level optimizations. The first four
// flags are the ablation axes.
struct OptimizationToggles {
  bool value_clipping = false;
  bool reward_scaling = false;
  bool orthogonal_init = false;
  bool lr_annealing = false;
  std::optional<ClipRange> reward_clip_range;
  bool obs_normalization = false;
  std::optional<ClipRange> obs_clip_range;
  std::optional<double> global_grad_clip;

  static constexpr int kAblationAxes = 4;
  static const std::array<const char*, kAblationAxes> kAxisNames;

  // Everything off: the minimal core algorithm.
  static OptimizationToggles none() { return {}; }
  // The settings of the reference PPO implementation.
  static OptimizationToggles ppo_defaults();
  static OptimizationToggles trpo_defaults();

  bool axis(int i) const;
  void set_axis(int i, bool on);
  // Bit i of the index is ablation axis i.
  int ablation_index() const;

  void validate() const;

  friend bool operator==(const OptimizationToggles&, const OptimizationToggles&) = default;
};

enum class ValueClipMode {
  min_of_branches,  // min[(V - Vt)^2, (clip(V) - Vt)^2]
  max_of_branches,  // the pessimistic variant found in some implementations
};

struct PpoConfig {
  double clip_eps = 0.2;
  int minibatches = 32;
  int policy_epochs = 10;
  double policy_lr = 1e-4;
  double value_lr = 1e-4;
  int value_epochs = 10;
  double entropy_coef = 0.0;
  double gamma = 0.99;
  double lambda = 0.95;
  int pairs_per_iter = 2000;
  ValueClipMode value_clip_mode = ValueClipMode::min_of_branches;

  void validate() const;
  friend bool operator==(const PpoConfig&, const PpoConfig&) = default;
};

struct TrpoConfig {
  double kl_delta = 0.01;
  int cg_steps = 10;
  double cg_damping = 0.1;
  int backtrack_steps = 10;
  double backtrack_coef = 0.5;
  double fisher_fraction = 0.10;
  double value_lr = 1e-4;
  int value_epochs = 10;
  int value_minibatches = 32;
  double gamma = 0.99;
  double lambda = 0.95;
  int pairs_per_iter = 2000;

  void validate() const;
  friend bool operator==(const TrpoConfig&, const TrpoConfig&) = default;
};

struct StepReport {
  int iteration = 0;
  double mean_reward = 0.0;
  double surrogate_before = 0.0;
  double surrogate_after = 0.0;
  double mean_kl = 0.0;
  double max_kl = 0.0;
  double max_ratio = 1.0;
  double accepted_step_scale = 1.0;  // TRPO backtracking coefficient; 0 when rejected
  std::string params_before;
  std::string params_after;
  int policy_gradient_steps = 0;
  bool step_rejected = false;
  std::string note;
};

}  // namespace dpg
