#pragma once

#include <dpg/diagnostics/sampling.hpp>

#include <vector>

namespace dpg {

struct TrustRegionRow {
  int iteration = 0;
  Split split = Split::train;
  double mean_reward = 0.0;
  double max_ratio = 1.0;
  double mean_kl = 0.0;
  double max_kl = 0.0;
  double ratio_threshold = 1.2;  // 1 + clip epsilon
  double kl_delta = 0.01;
};

// Ratios and KLs between `old_policy`, which collected `batch`, and
// `new_policy`.
TrustRegionRow trust_region_metrics(const GaussianPolicy& old_policy,
                                    const GaussianPolicy& new_policy, const TrainingBatch& batch,
                                    Split split, int iteration, double mean_reward,
                                    double clip_eps = 0.2, double kl_delta = 0.01);

struct OptimaProbePoint {
  double ratio = 0.0;
  double objective = 0.0;
  double derivative = 0.0;
};

struct OptimaProbeReport {
  double eps = 0.2;
  double advantage = 1.0;
  std::vector<OptimaProbePoint> points;
  double plateau_low = 0.0;   // extent of the grid points where the derivative is 0
  double plateau_high = 0.0;  // and the objective takes its plateau value
  bool plateau_constant = false;
  std::vector<double> boundaries;            // plateau ends strictly inside the grid
  int boundaries_in_trust_region = 0;        // those within [1 - eps, 1 + eps]
  bool theorem_holds = false;
};

// Default ratio grid: 301 points on [0, 3] with 1 - eps and 1 + eps inserted.
std::vector<double> optima_probe_grid(double eps);

// Clipped per-pair objective min(clip(rho) A, rho A) and the derivative used by
// the PPO update, on a grid of ratios.
OptimaProbeReport ppo_optima_probe(double eps, double advantage, const std::vector<double>& grid);

}  // namespace dpg
