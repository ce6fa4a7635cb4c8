#pragma once

#include <dpg/algo/config.hpp>
#include <dpg/policy/advantages.hpp>

namespace dpg {

struct Objective {
  double value = 0.0;
  ParamVector grad;
};

// Clipped per-pair surrogate min(clip(rho) A, rho A).
double clipped_term(double ratio, double advantage, double clip_eps);

// d/d rho of clipped_term. Nonzero only where the unclipped branch is the
// active minimum: A > 0 with rho < 1 + eps, or A < 0 with rho > 1 - eps. At
// the kinks the flat (zero) side is taken.
double clipped_term_slope(double ratio, double advantage, double clip_eps);

// Unclipped: mean(rho A) and its gradient mean(rho A grad log pi).
// Clipped: mean of clipped_term with the matching subgradient.
// Ratios are taken against batch.old_log_probs.
Objective surrogate_and_grad(const GaussianPolicy& policy, const TrainingBatch& batch,
                             bool clipped, double clip_eps);

// Unclipped: mean (V - V_targ)^2. Clipped: mean of the selected branch of
// (V - V_targ)^2 and (clip(V, V_old - eps, V_old + eps) - V_targ)^2.
Objective value_loss_and_grad(const ValueFunction& vf, const Matrix& states,
                              const Vector& old_values, const Vector& targets, bool clipped,
                              double clip_eps,
                              ValueClipMode mode = ValueClipMode::min_of_branches);

struct TrustRegionStats {
  double mean_kl = 0.0;
  double max_kl = 0.0;
  double max_ratio = 1.0;
};

// KL(old || new) per state and pi_new / pi_old per pair over a batch
// collected under `old_policy`.
TrustRegionStats trust_region_stats(const GaussianPolicy& old_policy,
                                    const GaussianPolicy& new_policy, const Matrix& states,
                                    const Matrix& actions, const Vector& old_log_probs);

}  // namespace dpg
