#include <dpg/algo/objectives.hpp>

#include <algorithm>
#include <cmath>

namespace dpg {

double clipped_term(double ratio, double advantage, double clip_eps) {
  const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
  return std::min(clipped * advantage, ratio * advantage);
}

double clipped_term_slope(double ratio, double advantage, double clip_eps) {
  if (advantage > 0.0 && ratio < 1.0 + clip_eps) return advantage;
  if (advantage < 0.0 && ratio > 1.0 - clip_eps) return advantage;
  return 0.0;
}

Objective surrogate_and_grad(const GaussianPolicy& policy, const TrainingBatch& batch,
                             bool clipped, double clip_eps) {
  const Index n = batch.size();
  if (n == 0) throw InvalidArgument("surrogate_and_grad: empty batch");
  if (batch.advantages.size() != n || batch.old_log_probs.size() != n) {
    throw InvalidArgument("surrogate_and_grad: batch fields misaligned");
  }
  const Vector lp = log_probs(policy, batch.states, batch.actions);
  const Vector ratio = (lp - batch.old_log_probs).array().exp();
  // d(term)/d(log pi) = rho * d(term)/d(rho)
  Vector weights(n);
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double a = batch.advantages(i);
    if (clipped) {
      total += clipped_term(ratio(i), a, clip_eps);
      weights(i) = ratio(i) * clipped_term_slope(ratio(i), a, clip_eps);
    } else {
      total += ratio(i) * a;
      weights(i) = ratio(i) * a;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  Objective out;
  out.value = total * inv_n;
  out.grad = weighted_log_prob_grad(policy, batch.states, batch.actions, weights * inv_n);
  return out;
}

Objective value_loss_and_grad(const ValueFunction& vf, const Matrix& states,
                              const Vector& old_values, const Vector& targets, bool clipped,
                              double clip_eps, ValueClipMode mode) {
  const Index n = states.cols();
  if (old_values.size() != n || targets.size() != n) {
    throw InvalidArgument("value_loss_and_grad: length mismatch");
  }
  if (n == 0) throw InvalidArgument("value_loss_and_grad: empty batch");
  MlpTape<double> tape;
  const Vector v = mlp_forward<double>(vf.net, vf.params, states, &tape).row(0).transpose();
  Matrix cot(1, n);
  double total = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) {
    const double err = v(i) - targets(i);
    const double plain = err * err;
    double loss = plain;
    double dloss = 2.0 * err;
    if (clipped) {
      const double lo = old_values(i) - clip_eps;
      const double hi = old_values(i) + clip_eps;
      const double vc = std::clamp(v(i), lo, hi);
      const double cerr = vc - targets(i);
      const double clipped_loss = cerr * cerr;
      const bool inside = v(i) > lo && v(i) < hi;
      const bool take_clipped = mode == ValueClipMode::min_of_branches ? clipped_loss < plain
                                                                        : clipped_loss > plain;
      if (take_clipped) {
        loss = clipped_loss;
        dloss = inside ? 2.0 * cerr : 0.0;
      }
    }
    total += loss;
    cot(0, i) = dloss * inv_n;
  }
  Objective out;
  out.value = total * inv_n;
  out.grad = mlp_backward<double>(vf.net, vf.params, tape, cot);
  return out;
}

TrustRegionStats trust_region_stats(const GaussianPolicy& old_policy,
                                    const GaussianPolicy& new_policy, const Matrix& states,
                                    const Matrix& actions, const Vector& old_log_probs) {
  if (states.cols() == 0) throw InvalidArgument("trust_region_stats: empty batch");
  TrustRegionStats out;
  const Vector kls = diag_gaussian_kls(old_policy, new_policy, states);
  out.mean_kl = kls.mean();
  out.max_kl = kls.maxCoeff();
  const Vector lp = log_probs(new_policy, states, actions);
  out.max_ratio = (lp - old_log_probs).array().exp().maxCoeff();
  return out;
}

}  // namespace dpg
