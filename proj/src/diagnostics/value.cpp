#include <dpg/diagnostics/value.hpp>

#include <dpg/algo/objectives.hpp>
#include <dpg/algo/updates.hpp>

#include <cmath>

namespace dpg {

double mean_relative_error(const Vector& predictions, const Vector& targets, double eps) {
  if (predictions.size() != targets.size()) throw InvalidArgument("mean_relative_error: length mismatch");
  if (targets.size() == 0) throw InvalidArgument("mean_relative_error: empty input");
  return ((predictions - targets).array().abs() / (targets.array().abs() + eps)).mean();
}

ValueQualityReport value_quality(const ValueFunction& vf, const RolloutBatch& batch, double gamma,
                                 double lambda, Split split, int checkpoint_iteration) {
  if (batch.pair_count == 0) throw InvalidArgument("value_quality: empty split");
  const AdvantageSet adv = gae_advantages(batch, gamma, lambda);
  const Vector predictions = values(vf, batch.states());
  ValueQualityReport report;
  report.checkpoint_iteration = checkpoint_iteration;
  report.split = split;
  report.gae_loss_mre = mean_relative_error(predictions, adv.value_targets);
  report.returns_mre = mean_relative_error(predictions, adv.returns);
  return report;
}

namespace {

ValueFunction regress_returns(const RolloutBatch& batch, const Matrix& states, double gamma,
                             const ValueFunction* tail_fn, const TrueValueOptions& options,
                             std::uint64_t seed) {
  TrainingBatch data;
  data.states = states;
  data.returns.resize(batch.pair_count);
  Index j = 0;
  for (const auto& traj : batch.trajectories) {
    double tail = 0.0;
    if (traj.truncated) {
      tail = tail_fn ? value(*tail_fn, traj.transitions.back().next_state) : traj.bootstrap_value;
    }
    const Vector r = discounted_returns(traj, gamma, tail);
    data.returns.segment(j, r.size()) = r;
    j += r.size();
  }
  const double mean = data.returns.mean();
  const double sd = std::sqrt((data.returns.array() - mean).square().mean());
  const double scale = sd > 1e-12 ? sd : 1.0;
  data.value_targets = (data.returns.array() - mean) / scale;
  data.old_values = Vector::Zero(batch.pair_count);
  data.actions = Matrix::Zero(1, batch.pair_count);
  data.old_log_probs = Vector::Zero(batch.pair_count);
  data.advantages = Vector::Zero(batch.pair_count);

  ValueFunction vf = ValueFunction::make(data.states.rows(), options.hidden, InitScheme::orthogonal,
                                         derive_seed(seed, 1));
  AdamState adam = AdamState::fresh(vf.params.size(), options.lr);
  fit_value(vf, adam, data, options.epochs, options.minibatches, false, 0.0,
            ValueClipMode::min_of_branches, std::nullopt, derive_seed(seed, 2));
  if (!vf.params.allFinite()) throw NumericalError("fit_true_value: regression diverged");

  const LayerBlock out = vf.net.layout().back();
  vf.params.segment(out.weight_offset, out.rows * out.cols) *= scale;
  vf.params(out.bias_offset) = vf.params(out.bias_offset) * scale + mean;
  return vf;
}

}  // namespace

ValueFunction fit_true_value(const RolloutBatch& batch, double gamma, const TrueValueOptions& options,
                             std::uint64_t seed) {
  if (batch.pair_count < 2) throw InvalidArgument("fit_true_value: need at least two pairs");
  if (options.epochs < 1 || options.minibatches < 1 || !(options.lr > 0.0) ||
      options.bootstrap_rounds < 1) {
    throw InvalidArgument("fit_true_value: epochs, minibatches, lr and bootstrap_rounds must be positive");
  }
  const Matrix states = batch.states();
  ValueFunction vf = regress_returns(batch, states, gamma, nullptr, options, seed);
  for (int round = 1; round < options.bootstrap_rounds; ++round) {
    vf = regress_returns(batch, states, gamma, &vf, options, derive_seed(seed, 10 + round));
  }
  return vf;
}

ValueFunction fit_true_value(const Agent& agent, const AgentConfig& config,
                             const TrueValueOptions& options, std::uint64_t seed) {
  const RolloutBatch batch = sample_batch(agent, config, options.pair_budget, derive_seed(seed, 0));
  return fit_true_value(batch, config.gamma(), options, seed);
}

}  // namespace dpg
