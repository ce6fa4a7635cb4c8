#include <dpg/algo/updates.hpp>

#include <dpg/algo/preprocessing.hpp>
#include <dpg/numerics/conjugate_gradient.hpp>
#include <dpg/numerics/dual.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dpg {

std::vector<std::vector<Index>> minibatch_indices(Index n, int count, Rng& rng) {
  if (count < 1) throw InvalidArgument("minibatch_indices: count must be >= 1");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  const Index chunks = std::min<Index>(count, std::max<Index>(n, 1));
  std::vector<std::vector<Index>> out;
  out.reserve(static_cast<std::size_t>(chunks));
  for (Index k = 0; k < chunks; ++k) {
    const Index lo = k * n / chunks;
    const Index hi = (k + 1) * n / chunks;
    if (hi > lo) out.emplace_back(perm.begin() + lo, perm.begin() + hi);
  }
  return out;
}

int fit_value(ValueFunction& vf, AdamState& adam, const TrainingBatch& batch, int epochs,
              int minibatches, bool clipped, double clip_eps, ValueClipMode mode,
              const std::optional<double>& grad_clip, std::uint64_t seed) {
  Rng rng(seed);
  int steps = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& idx : minibatch_indices(batch.size(), minibatches, rng)) {
      const TrainingBatch mb = batch.subset(idx);
      Objective loss =
          value_loss_and_grad(vf, mb.states, mb.old_values, mb.value_targets, clipped, clip_eps, mode);
      if (grad_clip) loss.grad = clip_global_norm(loss.grad, *grad_clip);
      adam_update(adam, vf.params, loss.grad);
      ++steps;
    }
  }
  return steps;
}

UpdateResult ppo_update(const GaussianPolicy& policy, const ValueFunction& vf,
                        const TrainingBatch& batch, const PpoConfig& config,
                        const OptimizationToggles& toggles, const Optimizers& optimizers,
                        std::uint64_t seed) {
  config.validate();
  toggles.validate();
  if (batch.size() == 0) throw InvalidArgument("ppo_update: empty batch");
  UpdateResult out{policy, vf, optimizers, {}};
  auto& report = out.report;
  report.params_before = param_id(policy.params);
  report.surrogate_before = surrogate_and_grad(policy, batch, true, config.clip_eps).value;

  Rng rng(derive_seed(seed, 1));
  ParamVector entropy_grad = ParamVector::Zero(policy.params.size());
  entropy_grad.tail(policy.act_dim()).setConstant(config.entropy_coef);
  for (int epoch = 0; epoch < config.policy_epochs; ++epoch) {
    for (const auto& idx : minibatch_indices(batch.size(), config.minibatches, rng)) {
      const TrainingBatch mb = batch.subset(idx);
      Objective obj = surrogate_and_grad(out.policy, mb, true, config.clip_eps);
      ParamVector ascent = obj.grad;
      if (config.entropy_coef != 0.0) ascent += entropy_grad;
      if (toggles.global_grad_clip) ascent = clip_global_norm(ascent, *toggles.global_grad_clip);
      adam_update(out.optimizers.policy, out.policy.params, -ascent);
      ++report.policy_gradient_steps;
    }
  }
  fit_value(out.value, out.optimizers.value, batch, config.value_epochs, config.minibatches,
            toggles.value_clipping, config.clip_eps, config.value_clip_mode, toggles.global_grad_clip,
            derive_seed(seed, 2));

  report.surrogate_after = surrogate_and_grad(out.policy, batch, true, config.clip_eps).value;
  const auto tr = trust_region_stats(policy, out.policy, batch.states, batch.actions, batch.old_log_probs);
  report.mean_kl = tr.mean_kl;
  report.max_kl = tr.max_kl;
  report.max_ratio = tr.max_ratio;
  report.accepted_step_scale = 1.0;
  report.params_after = param_id(out.policy.params);
  return out;
}

ParamVector fisher_vector_product(const GaussianPolicy& policy, const Matrix& states,
                                  const ParamVector& v) {
  if (v.size() != policy.params.size()) throw InvalidArgument("fisher_vector_product: v has wrong shape");
  const Index n = states.cols();
  if (n == 0) throw InvalidArgument("fisher_vector_product: no states");
  const Index np = policy.net_param_count();
  const Index ad = policy.act_dim();

  const Matrix mean_old = policy_means(policy, states);
  const Vector var_old = (2.0 * policy.log_std().array()).exp();

  const VectorX<Dual> theta = make_dual(policy.params, v);
  MlpTape<Dual> tape;
  const MatrixX<Dual> mean = mlp_forward<Dual>(policy.mean_net, theta.head(np), lift_constant(states), &tape);

  // Gradient of mean_s KL(old || theta) with respect to the means and log_std.
  const Dual inv_n = make_dual(1.0 / static_cast<double>(n), 0.0);
  MatrixX<Dual> cot(ad, n);
  VectorX<Dual> grad_log_std(ad);
  for (Index j = 0; j < ad; ++j) {
    using std::exp;
    const Dual log_std = theta(np + j);
    const Dual inv_var = exp(Dual(-2.0 * log_std));
    Dual acc = make_dual(0.0, 0.0);
    for (Index i = 0; i < n; ++i) {
      const Dual diff = mean(j, i) - mean_old(j, i);
      cot(j, i) = diff * inv_var * inv_n;
      acc += Dual(1.0 - (var_old(j) + diff * diff) * inv_var);
    }
    grad_log_std(j) = acc * inv_n;
  }
  const VectorX<Dual> grad_net = mlp_backward<Dual>(policy.mean_net, theta.head(np), tape, cot);

  ParamVector hv(policy.params.size());
  hv.head(np) = dual_derivatives(grad_net);
  hv.tail(ad) = dual_derivatives(grad_log_std);
  return hv;
}

Matrix subsample_states(const Matrix& states, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("subsample_states: fraction must be in (0, 1]");
  const Index n = states.cols();
  const auto m = static_cast<Index>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  if (n == 0 || m == 0) throw InvalidArgument("subsample_states: empty state subsample");
  if (m >= n) return states;
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  Rng rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(static_cast<std::size_t>(m));
  std::sort(idx.begin(), idx.end());
  Matrix out(states.rows(), m);
  for (Index j = 0; j < m; ++j) out.col(j) = states.col(idx[static_cast<std::size_t>(j)]);
  return out;
}

ParamVector fisher_vector_product(const GaussianPolicy& policy, const Matrix& states,
                                  const ParamVector& v, double fisher_fraction,
                                  std::uint64_t seed) {
  return fisher_vector_product(policy, subsample_states(states, fisher_fraction, seed), v);
}

NaturalStep trpo_direction(const GaussianPolicy& policy, const TrainingBatch& batch,
                           const TrpoConfig& config, std::uint64_t seed) {
  config.validate();
  NaturalStep step;
  step.gradient = surrogate_and_grad(policy, batch, false, 0.0).grad;
  const Matrix fisher_states = subsample_states(batch.states, config.fisher_fraction, seed);
  auto fvp = [&](const ParamVector& x) { return fisher_vector_product(policy, fisher_states, x); };
  step.direction = conjugate_gradient(fvp, step.gradient, config.cg_steps, config.cg_damping);
  if (!step.direction.allFinite()) throw NumericalError("trpo: non-finite conjugate gradient output");
  step.curvature = step.direction.dot(fvp(step.direction));
  if (!(step.curvature > 0.0) || !std::isfinite(step.curvature)) {
    throw NumericalError("trpo: non-positive curvature along the step direction");
  }
  step.full_step = std::sqrt(2.0 * config.kl_delta / step.curvature) * step.direction;
  return step;
}

UpdateResult trpo_step(const GaussianPolicy& policy, const ValueFunction& vf,
                       const TrainingBatch& batch, const TrpoConfig& config,
                       const OptimizationToggles& toggles, const Optimizers& optimizers,
                       std::uint64_t seed) {
  config.validate();
  toggles.validate();
  if (batch.size() == 0) throw InvalidArgument("trpo_step: empty batch");
  UpdateResult out{policy, vf, optimizers, {}};
  auto& report = out.report;
  report.params_before = param_id(policy.params);
  const Objective before = surrogate_and_grad(policy, batch, false, 0.0);
  report.surrogate_before = before.value;
  report.surrogate_after = before.value;
  report.accepted_step_scale = 0.0;
  report.step_rejected = true;

  if (before.grad.squaredNorm() == 0.0) {
    report.note = "zero surrogate gradient";
  } else {
    try {
      const NaturalStep step = trpo_direction(policy, batch, config, derive_seed(seed, 1));
      double coef = 1.0;
      for (int k = 0; k < config.backtrack_steps; ++k, coef *= config.backtrack_coef) {
        GaussianPolicy candidate = policy;
        candidate.params += coef * step.full_step;
        if (!candidate.params.allFinite()) continue;
        const auto tr = trust_region_stats(policy, candidate, batch.states, batch.actions,
                                           batch.old_log_probs);
        const double surr = surrogate_and_grad(candidate, batch, false, 0.0).value;
        if (tr.mean_kl <= config.kl_delta && surr > before.value) {
          out.policy = std::move(candidate);
          report.surrogate_after = surr;
          report.accepted_step_scale = coef;
          report.step_rejected = false;
          report.policy_gradient_steps = 1;
          break;
        }
      }
      if (report.step_rejected) report.note = "line search found no acceptable step";
    } catch (const NumericalError& e) {
      report.note = e.what();
    }
  }

  fit_value(out.value, out.optimizers.value, batch, config.value_epochs, config.value_minibatches,
            false, 0.0, ValueClipMode::min_of_branches, toggles.global_grad_clip,
            derive_seed(seed, 2));

  const auto tr = trust_region_stats(policy, out.policy, batch.states, batch.actions, batch.old_log_probs);
  report.mean_kl = tr.mean_kl;
  report.max_kl = tr.max_kl;
  report.max_ratio = tr.max_ratio;
  report.params_after = param_id(out.policy.params);
  return out;
}

}  // namespace dpg
