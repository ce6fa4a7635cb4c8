#pragma once

#include <dpg/algo/objectives.hpp>
#include <dpg/numerics/adam.hpp>

#include <cstdint>
#include <vector>

namespace dpg {

struct Optimizers {
  AdamState policy;
  AdamState value;
};

struct UpdateResult {
  GaussianPolicy policy;
  ValueFunction value;
  Optimizers optimizers;
  StepReport report;
};

// Seeded permutation of [0, n) cut into `count` nearly equal chunks.
std::vector<std::vector<Index>> minibatch_indices(Index n, int count, Rng& rng);

// `epochs` passes of minibatch Adam on the value loss. Returns the number of
// gradient applications.
int fit_value(ValueFunction& vf, AdamState& adam, const TrainingBatch& batch, int epochs,
              int minibatches, bool clipped, double clip_eps, ValueClipMode mode,
              const std::optional<double>& grad_clip, std::uint64_t seed);

// One PPO iteration on a batch with normalized advantages: `policy_epochs`
// passes of minibatch Adam ascent on the clipped surrogate (plus the entropy
// bonus), then value regression. With every toggle off this is PPO-M.
UpdateResult ppo_update(const GaussianPolicy& policy, const ValueFunction& vf,
                        const TrainingBatch& batch, const PpoConfig& config,
                        const OptimizationToggles& toggles, const Optimizers& optimizers,
                        std::uint64_t seed);

// H v, H the Hessian of mean_s KL(pi_old(.|s) || pi_theta(.|s)) at
// theta = theta_old, over the columns of `states`. Evaluated exactly by
// running the reverse pass on dual numbers seeded with v.
ParamVector fisher_vector_product(const GaussianPolicy& policy, const Matrix& states,
                                  const ParamVector& v);

// Uniform subsample of ceil(fraction * n) columns, order preserved.
Matrix subsample_states(const Matrix& states, double fraction, std::uint64_t seed);

ParamVector fisher_vector_product(const GaussianPolicy& policy, const Matrix& states,
                                  const ParamVector& v, double fisher_fraction,
                                  std::uint64_t seed);

struct NaturalStep {
  ParamVector gradient;   // unclipped surrogate gradient
  ParamVector direction;  // CG solution of (F + damping I) d = g
  double curvature = 0.0;  // d' F d
  ParamVector full_step;   // direction scaled so 0.5 s' F s = kl_delta
};

NaturalStep trpo_direction(const GaussianPolicy& policy, const TrainingBatch& batch,
                           const TrpoConfig& config, std::uint64_t seed);

// Natural-gradient step with backtracking line search on mean KL and the
// surrogate, then value regression. Rejected steps leave the policy
// bit-identical and report accepted_step_scale = 0.
UpdateResult trpo_step(const GaussianPolicy& policy, const ValueFunction& vf,
                       const TrainingBatch& batch, const TrpoConfig& config,
                       const OptimizationToggles& toggles, const Optimizers& optimizers,
                       std::uint64_t seed);

}  // namespace dpg
