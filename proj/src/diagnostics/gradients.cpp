#include <dpg/diagnostics/gradients.hpp>

#include <dpg/parallel.hpp>

#include <algorithm>
#include <limits>

namespace dpg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_workers(int workers) { return workers > 0 ? workers : default_workers(); }

std::vector<ParamVector> nonzero(const std::vector<ParamVector>& vectors, int& excluded) {
  std::vector<ParamVector> kept;
  for (const auto& v : vectors) {
    if (v.squaredNorm() > 0.0) kept.push_back(v);
    else ++excluded;
  }
  return kept;
}

CosineStats cosine_stats_or_nan(const std::vector<ParamVector>& kept, int resamples,
                                std::uint64_t seed) {
  if (kept.size() < 2) return {{kNaN, kNaN, kNaN}, 0};
  return pairwise_cosine_stats(kept, resamples, seed);
}

}  // namespace

GradientQualityReport gradient_quality_scan(const Agent& agent, const AgentConfig& config,
                                            int checkpoint_iteration,
                                            const GradientQualityOptions& options,
                                            std::uint64_t seed) {
  if (options.repeats < 2) throw InvalidArgument("gradient_quality_scan: repeats must be >= 2");
  if (options.budgets.empty()) throw InvalidArgument("gradient_quality_scan: no budgets");
  for (std::size_t b = 0; b < options.budgets.size(); ++b) {
    if (options.budgets[b] < 1 || (b > 0 && options.budgets[b] <= options.budgets[b - 1])) {
      throw InvalidArgument("gradient_quality_scan: budgets must be positive and strictly increasing");
    }
  }
  if (options.reference_budget < options.budgets.back()) {
    throw InvalidArgument("gradient_quality_scan: reference budget below the largest budget");
  }
  const auto repeats = static_cast<std::size_t>(options.repeats);
  const std::size_t nb = options.budgets.size();
  auto rollout_seed = [&](std::size_t b, std::size_t r) {
    return options.shared_seed ? derive_seed(seed, 0) : derive_seed(seed, 1, b, r);
  };

  GradientQualityReport report;
  report.checkpoint_iteration = checkpoint_iteration;
  report.reference_budget = options.reference_budget;

  const ParamVector reference =
      surrogate_gradient(agent, config, options.reference_budget, derive_seed(seed, 0));
  const bool have_reference = reference.squaredNorm() > 0.0;
  if (!have_reference) report.flags.push_back("reference gradient is zero");

  std::vector<ParamVector> grads(nb * repeats);
  parallel_for(grads.size(), resolve_workers(options.workers), [&](std::size_t item) {
    const std::size_t b = item / repeats;
    const std::size_t r = item % repeats;
    grads[item] = surrogate_gradient(agent, config, options.budgets[b], rollout_seed(b, r));
  });

  for (std::size_t b = 0; b < nb; ++b) {
    GradientQualityRow row;
    row.budget = options.budgets[b];
    row.marker = row.budget == options.marker_budget;
    const std::vector<ParamVector> budget_grads(grads.begin() + static_cast<std::ptrdiff_t>(b * repeats),
                                                grads.begin() + static_cast<std::ptrdiff_t>((b + 1) * repeats));
    const auto kept = nonzero(budget_grads, row.excluded);
    if (row.excluded > 0) {
      report.flags.push_back("budget " + std::to_string(row.budget) + ": " +
                             std::to_string(row.excluded) + " zero gradients excluded");
    }
    row.pairwise = cosine_stats_or_nan(kept, options.bootstrap_resamples, derive_seed(seed, 2, b));
    if (have_reference && !kept.empty()) {
      std::vector<double> cos;
      for (const auto& g : kept) cos.push_back(cosine_similarity(g, reference));
      row.to_reference = bootstrap_mean(cos, options.bootstrap_resamples, derive_seed(seed, 3, b));
    } else {
      row.to_reference = {kNaN, kNaN, kNaN};
    }
    report.rows.push_back(row);
  }
  return report;
}

StepVarianceReport step_variance_scan(const Agent& agent, const AgentConfig& config,
                                      int checkpoint_iteration, int repeats, std::uint64_t seed,
                                      bool shared_seed, Index kl_states, int workers) {
  if (repeats < 2) throw InvalidArgument("step_variance_scan: repeats must be >= 2");
  if (kl_states < 1) throw InvalidArgument("step_variance_scan: kl_states must be >= 1");
  const auto n = static_cast<std::size_t>(repeats);
  std::vector<UpdateResult> updates(n);
  parallel_for(n, resolve_workers(workers), [&](std::size_t r) {
    const auto rollout = shared_seed ? derive_seed(seed, 1) : derive_seed(seed, 1, r);
    const auto update = shared_seed ? derive_seed(seed, 2) : derive_seed(seed, 2, r);
    const RolloutBatch batch = sample_batch(agent, config, config.pairs_per_iter(), rollout);
    updates[r] = apply_update(agent, config, prepare_batch(config, batch), update);
  });

  StepVarianceReport report;
  report.checkpoint_iteration = checkpoint_iteration;
  report.algorithm = config.algorithm;
  report.repeats = repeats;
  std::vector<ParamVector> steps;
  std::vector<const GaussianPolicy*> policies;
  for (const auto& u : updates) {
    ParamVector step = u.policy.params - agent.policy.params;
    if (u.report.step_rejected || step.squaredNorm() == 0.0) {
      ++report.rejected;
      continue;
    }
    steps.push_back(std::move(step));
    policies.push_back(&u.policy);
  }
  report.step_cosine = cosine_stats_or_nan(steps, 1000, derive_seed(seed, 3));

  const Matrix states = sample_batch(agent, config, kl_states, derive_seed(seed, 0)).states();
  std::vector<Matrix> means;
  for (const auto* p : policies) means.push_back(policy_means(*p, states));
  std::vector<double> kls;
  for (std::size_t i = 0; i < policies.size(); ++i) {
    for (std::size_t j = i + 1; j < policies.size(); ++j) {
      const Vector ls_i = policies[i]->log_std();
      const Vector ls_j = policies[j]->log_std();
      double total = 0.0;
      for (Index s = 0; s < states.cols(); ++s) {
        const Vector mi = means[i].col(s);
        const Vector mj = means[j].col(s);
        total += 0.5 * (diag_gaussian_kl(mi, ls_i, mj, ls_j) + diag_gaussian_kl(mj, ls_j, mi, ls_i));
      }
      kls.push_back(total / static_cast<double>(states.cols()));
    }
  }
  report.pairwise_kl = kls.empty() ? IntervalEstimate{kNaN, kNaN, kNaN}
                                   : bootstrap_mean(kls, 1000, derive_seed(seed, 4));
  return report;
}

std::string to_string(Baseline baseline) {
  switch (baseline) {
    case Baseline::agent_value: return "agent_value";
    case Baseline::true_value: return "true_value";
    case Baseline::zero: return "zero";
  }
  return "agent_value";
}

BaselineVarianceReport baseline_variance_comparison(const Agent& agent, const AgentConfig& config,
                                                    const ValueFunction& true_value,
                                                    const std::vector<Index>& budgets,
                                                    int repeats, int checkpoint_iteration,
                                                    std::uint64_t seed, int workers) {
  if (repeats < 2) throw InvalidArgument("baseline_variance_comparison: repeats must be >= 2");
  if (budgets.empty()) throw InvalidArgument("baseline_variance_comparison: no budgets");
  if (true_value.net.input_size() != agent.policy.obs_dim()) {
    throw InvalidArgument("baseline_variance_comparison: value function input size mismatch");
  }
  const auto n = static_cast<std::size_t>(repeats);
  const std::size_t nb = budgets.size();
  constexpr std::size_t kBaselines = 3;
  std::vector<std::array<ParamVector, kBaselines>> grads(nb * n);
  parallel_for(grads.size(), resolve_workers(workers), [&](std::size_t item) {
    const std::size_t b = item / n;
    const std::size_t r = item % n;
    const RolloutBatch batch = sample_batch(agent, config, budgets[b], derive_seed(seed, 1, b, r));
    const double gamma = config.gamma();
    const double lambda = config.lambda();
    grads[item][0] = surrogate_gradient(agent.policy, batch, evaluate_values(agent.value, batch), gamma, lambda);
    grads[item][1] = surrogate_gradient(agent.policy, batch, evaluate_values(true_value, batch), gamma, lambda);
    grads[item][2] = surrogate_gradient(agent.policy, batch, zero_values(batch), gamma, 1.0);
  });

  BaselineVarianceReport report;
  report.checkpoint_iteration = checkpoint_iteration;
  const std::array<Baseline, kBaselines> kinds{Baseline::agent_value, Baseline::true_value, Baseline::zero};
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t k = 0; k < kBaselines; ++k) {
      std::vector<ParamVector> vs;
      for (std::size_t r = 0; r < n; ++r) vs.push_back(grads[b * n + r][k]);
      int excluded = 0;
      const auto kept = nonzero(vs, excluded);
      report.rows.push_back({kinds[k], budgets[b], cosine_stats_or_nan(kept, 1000, derive_seed(seed, 2, b, k))});
    }
  }
  return report;
}

double analytic_gradient_variance(const TwoStateMdp& mdp, const std::array<double, 2>& baseline) {
  double total = 0.0;
  for (int s = 0; s < 2; ++s) {
    const double p = mdp.prob[s];
    const double gap = mdp.state_value(s) - baseline[s];
    const double k2 = mdp.k[s] * mdp.k[s];
    const double second_moment = p * (gap * gap / (mdp.sigma[s] * mdp.sigma[s]) + 3.0 * k2);
    const double mean = p * mdp.k[s];
    total += second_moment - mean * mean;
  }
  return total;
}

double sampled_gradient_variance(const TwoStateMdp& mdp, const std::array<double, 2>& baseline,
                                 int samples, std::uint64_t seed) {
  if (samples < 2) throw InvalidArgument("sampled_gradient_variance: samples must be >= 2");
  Rng rng(seed);
  std::bernoulli_distribution pick_second(mdp.prob[1] / (mdp.prob[0] + mdp.prob[1]));
  std::normal_distribution<double> normal;
  std::array<RunningStats, 2> stats;
  for (int i = 0; i < samples; ++i) {
    const int s = pick_second(rng) ? 1 : 0;
    const double a = mdp.mu[s] + mdp.sigma[s] * normal(rng);
    const double r = mdp.k[s] * a + mdp.c[s];
    const double g = (r - baseline[s]) * (a - mdp.mu[s]) / (mdp.sigma[s] * mdp.sigma[s]);
    stats[s].add(g);
    stats[1 - s].add(0.0);
  }
  return stats[0].variance() + stats[1].variance();
}

}  // namespace dpg
