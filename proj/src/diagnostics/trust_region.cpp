#include <dpg/diagnostics/trust_region.hpp>

#include <dpg/algo/objectives.hpp>
#include <dpg/diagnostics/landscape.hpp>

#include <algorithm>

namespace dpg {

TrustRegionRow trust_region_metrics(const GaussianPolicy& old_policy,
                                    const GaussianPolicy& new_policy, const TrainingBatch& batch,
                                    Split split, int iteration, double mean_reward,
                                    double clip_eps, double kl_delta) {
  const TrustRegionStats stats =
      trust_region_stats(old_policy, new_policy, batch.states, batch.actions, batch.old_log_probs);
  TrustRegionRow row;
  row.iteration = iteration;
  row.split = split;
  row.mean_reward = mean_reward;
  row.max_ratio = stats.max_ratio;
  row.mean_kl = stats.mean_kl;
  row.max_kl = stats.max_kl;
  row.ratio_threshold = 1.0 + clip_eps;
  row.kl_delta = kl_delta;
  return row;
}

std::vector<double> optima_probe_grid(double eps) {
  std::vector<double> grid = linspace(0.0, 3.0, 301);
  grid.push_back(1.0 - eps);
  grid.push_back(1.0 + eps);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

OptimaProbeReport ppo_optima_probe(double eps, double advantage, const std::vector<double>& grid) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("ppo_optima_probe: eps must be in (0, 1)");
  if (advantage == 0.0) throw InvalidArgument("ppo_optima_probe: advantage must be nonzero");
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end())) {
    throw InvalidArgument("ppo_optima_probe: grid must be sorted with at least two points");
  }
  OptimaProbeReport report;
  report.eps = eps;
  report.advantage = advantage;
  for (double rho : grid) {
    report.points.push_back({rho, clipped_term(rho, advantage, eps), clipped_term_slope(rho, advantage, eps)});
  }
  // The plateau sits at the clipped value: (1 + eps) A for A > 0, (1 - eps) A for A < 0.
  const double plateau_value = (advantage > 0.0 ? 1.0 + eps : 1.0 - eps) * advantage;
  std::vector<bool> on(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    on[i] = report.points[i].derivative == 0.0 && report.points[i].objective == plateau_value;
  }
  const auto first = std::find(on.begin(), on.end(), true);
  if (first == on.end()) return report;
  const auto last = std::find(on.rbegin(), on.rend(), true);
  const auto lo = static_cast<std::size_t>(first - on.begin());
  const auto hi = grid.size() - 1 - static_cast<std::size_t>(last - on.rbegin());
  report.plateau_low = grid[lo];
  report.plateau_high = grid[hi];
  report.plateau_constant = std::all_of(on.begin() + static_cast<std::ptrdiff_t>(lo),
                                        on.begin() + static_cast<std::ptrdiff_t>(hi) + 1,
                                        [](bool b) { return b; });
  if (lo > 0) report.boundaries.push_back(grid[lo]);
  if (hi + 1 < grid.size()) report.boundaries.push_back(grid[hi]);
  for (double b : report.boundaries) {
    if (b >= 1.0 - eps && b <= 1.0 + eps) ++report.boundaries_in_trust_region;
  }
  // Every derivative outside the plateau must be nonzero for the plateau to
  // be the full set of optima.
  bool outside_moving = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if ((i < lo || i > hi) && report.points[i].derivative == 0.0) outside_moving = false;
  }
  report.theorem_holds = report.plateau_constant && outside_moving &&
                         report.boundaries_in_trust_region == 1;
  return report;
}

}  // namespace dpg
