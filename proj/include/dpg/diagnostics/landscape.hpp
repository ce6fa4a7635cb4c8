#pragma once

#include <dpg/diagnostics/sampling.hpp>
#include <dpg/numerics/stats.hpp>

#include <cstdint>
#include <vector>

namespace dpg {

std::vector<double> linspace(double low, double high, int count);

struct LandscapeOptions {
  std::vector<double> step_axis = linspace(-1.0, 2.0, 16);  // spacing 0.2 keeps 0 and 1 on the grid
  std::vector<double> random_axis = linspace(-1.0, 1.0, 21);
  Index surrogate_pairs = 2000;
  Index true_pairs = 100000;
  double value_cap = 1e12;  // magnitude cap for non-finite surrogate cells
  int workers = 0;
};

struct LandscapeCell {
  double step = 0.0;    // multiplier of the update step
  double random = 0.0;  // multiplier of the random direction
  double surrogate = 0.0;
  IntervalEstimate true_reward;
  Index pairs = 0;
  bool flagged = false;
};

struct LandscapeGrid {
  int checkpoint_iteration = 0;
  std::vector<double> step_axis;
  std::vector<double> random_axis;
  ParamVector random_direction;    // Gaussian, rescaled to norm 2
  std::vector<LandscapeCell> cells;  // step index major

  const LandscapeCell& at(std::size_t step_index, std::size_t random_index) const {
    return cells[step_index * random_axis.size() + random_index];
  }
};

// theta' = theta + a step + b dir over the grid. The surrogate uses one batch
// collected at theta; the true reward uses fresh rollouts at theta' with the
// same seed in every cell.
LandscapeGrid landscape_scan(const Agent& agent, const AgentConfig& config,
                             const ParamVector& update_step, const LandscapeOptions& options,
                             int checkpoint_iteration, std::uint64_t seed);

// Mean episode reward at `policy` with a bootstrap interval over episodes.
IntervalEstimate estimate_true_reward(const Agent& agent, const AgentConfig& config,
                                      const GaussianPolicy& policy, Index pairs,
                                      std::uint64_t seed);

}  // namespace dpg
