#pragma once

#include <dpg/diagnostics/sampling.hpp>
#include <dpg/numerics/stats.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dpg {

struct GradientQualityOptions {
  std::vector<Index> budgets{2000, 20000, 100000};
  int repeats = 10;
  Index reference_budget = 1000000;
  Index marker_budget = 2000;  // the regime standard implementations train in
  bool shared_seed = false;    // every repeat (and the reference) reuses one rollout seed
  int bootstrap_resamples = 1000;
  int workers = 0;             // 0: default_workers()
};

struct GradientQualityRow {
  Index budget = 0;
  CosineStats pairwise;
  IntervalEstimate to_reference;
  int excluded = 0;  // zero gradients left out of the statistics
  bool marker = false;
};

struct GradientQualityReport {
  int checkpoint_iteration = 0;
  Index reference_budget = 0;
  std::vector<GradientQualityRow> rows;
  std::vector<std::string> flags;
};

GradientQualityReport gradient_quality_scan(const Agent& agent, const AgentConfig& config,
                                            int checkpoint_iteration,
                                            const GradientQualityOptions& options,
                                            std::uint64_t seed);

struct StepVarianceReport {
  int checkpoint_iteration = 0;
  Algorithm algorithm = Algorithm::ppo;
  int repeats = 0;
  int rejected = 0;  // TRPO steps that were rejected and excluded
  CosineStats step_cosine;
  IntervalEstimate pairwise_kl;  // symmetrized, averaged over a fixed state sample
};

// `repeats` full update steps from independent rollouts at one checkpoint.
// With shared_seed every repeat reuses the same rollouts and update seed.
StepVarianceReport step_variance_scan(const Agent& agent, const AgentConfig& config,
                                      int checkpoint_iteration, int repeats, std::uint64_t seed,
                                      bool shared_seed = false, Index kl_states = 1000,
                                      int workers = 0);

enum class Baseline { agent_value, true_value, zero };
std::string to_string(Baseline baseline);

struct BaselineRow {
  Baseline baseline = Baseline::agent_value;
  Index budget = 0;
  CosineStats pairwise;
};

struct BaselineVarianceReport {
  int checkpoint_iteration = 0;
  std::vector<BaselineRow> rows;
};

// Gradient estimates under each baseline on shared rollouts (paired design).
// The zero baseline replaces advantages with discounted returns.
BaselineVarianceReport baseline_variance_comparison(const Agent& agent, const AgentConfig& config,
                                                    const ValueFunction& true_value,
                                                    const std::vector<Index>& budgets,
                                                    int repeats, int checkpoint_iteration,
                                                    std::uint64_t seed, int workers = 0);

// One-step MDP with two states. In state s (probability p_s) the policy draws
// a ~ N(mu_s, sigma_s^2) and receives r = k_s a + c_s, so V(s) = k_s mu_s + c_s.
struct TwoStateMdp {
  std::array<double, 2> prob{0.5, 0.5};
  std::array<double, 2> mu{0.0, 0.0};
  std::array<double, 2> sigma{1.0, 1.0};
  std::array<double, 2> k{1.0, 1.0};
  std::array<double, 2> c{0.0, 0.0};

  double state_value(int s) const { return k[s] * mu[s] + c[s]; }
};

// Total variance (trace of the covariance) of the single-sample estimator
// (r - b_s) grad_mu log pi(a|s), in closed form.
double analytic_gradient_variance(const TwoStateMdp& mdp, const std::array<double, 2>& baseline);

// Monte Carlo estimate of the same quantity.
double sampled_gradient_variance(const TwoStateMdp& mdp, const std::array<double, 2>& baseline,
                                 int samples, std::uint64_t seed);

}  // namespace dpg
