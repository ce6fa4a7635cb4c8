#pragma once

#include <dpg/diagnostics/sampling.hpp>

#include <cstdint>
#include <vector>

namespace dpg {

// mean_i |pred_i - target_i| / (|target_i| + eps)
double mean_relative_error(const Vector& predictions, const Vector& targets, double eps = 1e-8);

struct ValueQualityReport {
  int checkpoint_iteration = 0;
  Split split = Split::train;
  double gae_loss_mre = 0.0;  // against V_old(s) + A_GAE(s, a)
  double returns_mre = 0.0;   // against the empirical discounted return R_t
};

// Scores `vf` on a batch whose stored value predictions come from the value
// function that collected it (V_old).
ValueQualityReport value_quality(const ValueFunction& vf, const RolloutBatch& batch, double gamma,
                                 double lambda, Split split, int checkpoint_iteration);

struct TrueValueOptions {
  Index pair_budget = 50000;
  std::vector<Index> hidden{64, 64};
  int epochs = 30;
  int minibatches = 32;
  double lr = 1e-3;
  int bootstrap_rounds = 4;
};

// Fresh value network regressed onto the discounted returns of pairs drawn
// from the agent's current policy. Targets are standardized during the fit
// and the output layer is rescaled afterwards. Tails cut by the time limit are
// bootstrapped with the previous round's fit, so after a few rounds the
// network approximates the untruncated discounted value.
ValueFunction fit_true_value(const Agent& agent, const AgentConfig& config,
                             const TrueValueOptions& options, std::uint64_t seed);
ValueFunction fit_true_value(const RolloutBatch& batch, double gamma, const TrueValueOptions& options,
                             std::uint64_t seed);

}  // namespace dpg
