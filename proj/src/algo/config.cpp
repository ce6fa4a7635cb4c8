#include <dpg/algo/config.hpp>

#include <cmath>

namespace dpg {

const std::array<const char*, OptimizationToggles::kAblationAxes> OptimizationToggles::kAxisNames = {
    "value_clipping", "reward_scaling", "orthogonal_init", "lr_annealing"};

OptimizationToggles OptimizationToggles::ppo_defaults() {
  OptimizationToggles t;
  t.value_clipping = true;
  t.reward_scaling = true;
  t.orthogonal_init = true;
  t.lr_annealing = true;
  t.reward_clip_range = ClipRange{-10.0, 10.0};
  t.obs_normalization = true;
  t.obs_clip_range = ClipRange{-10.0, 10.0};
  t.global_grad_clip = 0.5;
  return t;
}

OptimizationToggles OptimizationToggles::trpo_defaults() {
  OptimizationToggles t;
  t.orthogonal_init = true;
  t.obs_normalization = true;
  t.obs_clip_range = ClipRange{-10.0, 10.0};
  return t;
}

bool OptimizationToggles::axis(int i) const {
  switch (i) {
    case 0: return value_clipping;
    case 1: return reward_scaling;
    case 2: return orthogonal_init;
    case 3: return lr_annealing;
    default: throw InvalidArgument("OptimizationToggles: axis out of range");
  }
}

void OptimizationToggles::set_axis(int i, bool on) {
  switch (i) {
    case 0: value_clipping = on; break;
    case 1: reward_scaling = on; break;
    case 2: orthogonal_init = on; break;
    case 3: lr_annealing = on; break;
    default: throw InvalidArgument("OptimizationToggles: axis out of range");
  }
}

int OptimizationToggles::ablation_index() const {
  int idx = 0;
  for (int i = 0; i < kAblationAxes; ++i)
    if (axis(i)) idx |= 1 << i;
  return idx;
}

void OptimizationToggles::validate() const {
  for (const auto* r : {&reward_clip_range, &obs_clip_range}) {
    if (*r && !((*r)->low < (*r)->high)) throw InvalidArgument("OptimizationToggles: clip range needs low < high");
  }
  if (global_grad_clip && !(*global_grad_clip > 0.0)) {
    throw InvalidArgument("OptimizationToggles: global_grad_clip must be positive");
  }
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace

void PpoConfig::validate() const {
  require(clip_eps > 0.0 && clip_eps < 1.0, "PpoConfig: clip_eps must be in (0, 1)");
  require(minibatches >= 1, "PpoConfig: minibatches must be >= 1");
  require(policy_epochs >= 0 && value_epochs >= 0, "PpoConfig: epochs must be >= 0");
  require(policy_lr > 0.0 && value_lr > 0.0, "PpoConfig: learning rates must be positive");
  require(entropy_coef >= 0.0, "PpoConfig: entropy_coef must be >= 0");
  require(gamma > 0.0 && gamma <= 1.0, "PpoConfig: gamma must be in (0, 1]");
  require(lambda >= 0.0 && lambda <= 1.0, "PpoConfig: lambda must be in [0, 1]");
  require(pairs_per_iter >= 1, "PpoConfig: pairs_per_iter must be >= 1");
}

void TrpoConfig::validate() const {
  require(kl_delta > 0.0, "TrpoConfig: kl_delta must be positive");
  require(cg_steps >= 1, "TrpoConfig: cg_steps must be >= 1");
  require(cg_damping >= 0.0, "TrpoConfig: cg_damping must be >= 0");
  require(backtrack_steps >= 1, "TrpoConfig: backtrack_steps must be >= 1");
  require(backtrack_coef > 0.0 && backtrack_coef < 1.0, "TrpoConfig: backtrack_coef must be in (0, 1)");
  require(fisher_fraction > 0.0 && fisher_fraction <= 1.0, "TrpoConfig: fisher_fraction must be in (0, 1]");
  require(value_lr > 0.0, "TrpoConfig: value_lr must be positive");
  require(value_epochs >= 0 && value_minibatches >= 1, "TrpoConfig: value epochs/minibatches");
  require(gamma > 0.0 && gamma <= 1.0, "TrpoConfig: gamma must be in (0, 1]");
  require(lambda >= 0.0 && lambda <= 1.0, "TrpoConfig: lambda must be in [0, 1]");
  require(pairs_per_iter >= 1, "TrpoConfig: pairs_per_iter must be >= 1");
}

}  // namespace dpg
