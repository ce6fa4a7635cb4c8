#include <dpg/algo/preprocessing.hpp>

#include <algorithm>
#include <cmath>

namespace dpg {

namespace {

double scale_denominator(const RunningStats& stats) {
  if (stats.count < 2) return 1.0;
  const double sd = stats.stddev();
  return sd > 0.0 ? sd : 1.0;
}

Vector normalize_and_clip(const std::vector<RunningStats>& stats, const Vector& obs,
                          const OptimizationToggles& toggles) {
  Vector out = obs;
  if (toggles.obs_normalization) {
    for (Index i = 0; i < out.size(); ++i) {
      const auto& s = stats[static_cast<std::size_t>(i)];
      const double sd = s.stddev();
      out(i) = (out(i) - s.mean) / (sd > 0.0 ? sd : 1.0);
    }
  }
  if (toggles.obs_clip_range) {
    out = out.cwiseMax(toggles.obs_clip_range->low).cwiseMin(toggles.obs_clip_range->high);
  }
  return out;
}

}  // namespace

ScaledReward reward_scale_update(RewardScaler state, double reward, double gamma) {
  if (!std::isfinite(reward)) throw InvalidArgument("reward_scale_update: non-finite reward");
  state.running_return = gamma * state.running_return + reward;
  state.stats.add(state.running_return);
  const double scaled = reward / scale_denominator(state.stats);
  return {scaled, state};
}

double reward_scale_frozen(const RewardScaler& state, double reward) {
  if (!std::isfinite(reward)) throw InvalidArgument("reward_scale_frozen: non-finite reward");
  return reward / scale_denominator(state.stats);
}

Vector preprocess_observation(std::vector<RunningStats>& obs_stats, const Vector& obs,
                              const OptimizationToggles& toggles) {
  if (toggles.obs_normalization) {
    if (static_cast<Index>(obs_stats.size()) != obs.size()) {
      throw InvalidArgument("preprocess_observation: statistics dimension mismatch");
    }
    for (Index i = 0; i < obs.size(); ++i) obs_stats[static_cast<std::size_t>(i)].add(obs(i));
  }
  return normalize_and_clip(obs_stats, obs, toggles);
}

Vector preprocess_observation_frozen(const std::vector<RunningStats>& obs_stats, const Vector& obs,
                                     const OptimizationToggles& toggles) {
  if (toggles.obs_normalization && static_cast<Index>(obs_stats.size()) != obs.size()) {
    throw InvalidArgument("preprocess_observation: statistics dimension mismatch");
  }
  return normalize_and_clip(obs_stats, obs, toggles);
}

ParamVector clip_global_norm(const ParamVector& grad, double max_norm) {
  if (!(max_norm > 0.0)) throw InvalidArgument("clip_global_norm: max_norm must be positive");
  const double norm = grad.norm();
  if (norm <= max_norm) return grad;
  return grad * (max_norm / norm);
}

Preprocessor::Preprocessor(const OptimizationToggles& toggles, Index obs_dim, double gamma)
    : toggles_(toggles), gamma_(gamma), obs_stats_(static_cast<std::size_t>(obs_dim)) {
  toggles_.validate();
}

Vector Preprocessor::observation(const Vector& raw) {
  if (frozen_) return preprocess_observation_frozen(obs_stats_, raw, toggles_);
  return preprocess_observation(obs_stats_, raw, toggles_);
}

double Preprocessor::reward(double raw) {
  double r = raw;
  if (toggles_.reward_scaling) {
    if (frozen_) {
      r = reward_scale_frozen(scaler_, raw);
    } else {
      auto scaled = reward_scale_update(scaler_, raw, gamma_);
      scaler_ = scaled.state;
      r = scaled.reward;
    }
  }
  if (toggles_.reward_clip_range) {
    r = std::clamp(r, toggles_.reward_clip_range->low, toggles_.reward_clip_range->high);
  }
  return r;
}

Preprocessor Preprocessor::frozen() const {
  Preprocessor copy = *this;
  copy.frozen_ = true;
  copy.scaler_.start_episode();
  return copy;
}

}  // namespace dpg
