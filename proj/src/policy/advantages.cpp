#include <dpg/policy/advantages.hpp>

#include <cmath>

namespace dpg {

Vector discounted_returns(const Trajectory& trajectory, double gamma, double bootstrap_value) {
  if (trajectory.transitions.empty()) throw InvalidArgument("discounted_returns: empty trajectory");
  if (!(gamma > 0.0 && gamma < 1.0)) throw InvalidArgument("discounted_returns: gamma must be in (0, 1)");
  const Index n = trajectory.size();
  Vector out(n);
  double next = trajectory.truncated ? bootstrap_value : 0.0;
  for (Index t = n - 1; t >= 0; --t) {
    next = trajectory.transitions[static_cast<std::size_t>(t)].scaled_reward + gamma * next;
    out(t) = next;
  }
  return out;
}

BatchValues stored_values(const RolloutBatch& batch) {
  BatchValues out;
  out.values.resize(batch.pair_count);
  Index j = 0;
  for (const auto& traj : batch.trajectories) {
    for (const auto& tr : traj.transitions) out.values(j++) = tr.value_pred;
    out.bootstrap.push_back(traj.bootstrap_value);
  }
  return out;
}

BatchValues evaluate_values(const ValueFunction& vf, const RolloutBatch& batch) {
  BatchValues out;
  out.values = values(vf, batch.states());
  for (const auto& traj : batch.trajectories) {
    out.bootstrap.push_back(traj.truncated ? value(vf, traj.transitions.back().next_state) : 0.0);
  }
  return out;
}

BatchValues zero_values(const RolloutBatch& batch) {
  return {Vector::Zero(batch.pair_count), std::vector<double>(batch.trajectories.size(), 0.0)};
}

NormalizedAdvantages normalize_advantages(const Vector& advantages) {
  if (advantages.size() < 2) throw InvalidArgument("normalize_advantages: need at least two elements");
  const double mean = advantages.mean();
  const Vector centered = advantages.array() - mean;
  const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(advantages.size()));
  NormalizedAdvantages out;
  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
    out.values = Vector::Zero(advantages.size());
    out.degenerate = true;
    return out;
  }
  out.values = centered / (sd + 1e-8);
  return out;
}

AdvantageSet gae_advantages(const RolloutBatch& batch, const BatchValues& values, double gamma,
                            double lambda) {
  if (values.values.size() != batch.pair_count ||
      values.bootstrap.size() != batch.trajectories.size()) {
    throw InvalidArgument("gae_advantages: values do not align with the batch");
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InvalidArgument("gae_advantages: gamma must be in (0, 1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("gae_advantages: lambda must be in [0, 1]");
  AdvantageSet out;
  out.advantages.resize(batch.pair_count);
  out.returns.resize(batch.pair_count);
  Index base = 0;
  for (std::size_t k = 0; k < batch.trajectories.size(); ++k) {
    const auto& traj = batch.trajectories[k];
    const Index n = traj.size();
    const double tail = traj.truncated ? values.bootstrap[k] : 0.0;
    double next_value = tail;
    double running_adv = 0.0;
    double running_ret = tail;
    for (Index t = n - 1; t >= 0; --t) {
      const double r = traj.transitions[static_cast<std::size_t>(t)].scaled_reward;
      const double v = values.values(base + t);
      const double delta = r + gamma * next_value - v;
      running_adv = delta + gamma * lambda * running_adv;
      running_ret = r + gamma * running_ret;
      out.advantages(base + t) = running_adv;
      out.returns(base + t) = running_ret;
      next_value = v;
    }
    base += n;
  }
  out.value_targets = values.values + out.advantages;
  if (batch.pair_count >= 2) {
    auto norm = normalize_advantages(out.advantages);
    out.normalized = std::move(norm.values);
    out.degenerate = norm.degenerate;
  } else {
    out.normalized = Vector::Zero(batch.pair_count);
    out.degenerate = true;
  }
  return out;
}

AdvantageSet gae_advantages(const RolloutBatch& batch, double gamma, double lambda) {
  return gae_advantages(batch, stored_values(batch), gamma, lambda);
}

TrainingBatch TrainingBatch::subset(const std::vector<Index>& indices) const {
  TrainingBatch out;
  const auto n = static_cast<Index>(indices.size());
  out.states.resize(states.rows(), n);
  out.actions.resize(actions.rows(), n);
  out.old_log_probs.resize(n);
  out.advantages.resize(n);
  out.old_values.resize(n);
  out.value_targets.resize(n);
  out.returns.resize(n);
  for (Index j = 0; j < n; ++j) {
    const Index i = indices[static_cast<std::size_t>(j)];
    out.states.col(j) = states.col(i);
    out.actions.col(j) = actions.col(i);
    out.old_log_probs(j) = old_log_probs(i);
    out.advantages(j) = advantages(i);
    out.old_values(j) = old_values(i);
    out.value_targets(j) = value_targets(i);
    out.returns(j) = returns(i);
  }
  return out;
}

TrainingBatch make_training_batch(const RolloutBatch& batch, const AdvantageSet& adv) {
  if (adv.advantages.size() != batch.pair_count) {
    throw InvalidArgument("make_training_batch: advantage set does not match the batch");
  }
  TrainingBatch out;
  out.states = batch.states();
  out.actions = batch.actions();
  out.old_log_probs.resize(batch.pair_count);
  out.old_values.resize(batch.pair_count);
  Index j = 0;
  for (const auto& traj : batch.trajectories) {
    for (const auto& tr : traj.transitions) {
      out.old_log_probs(j) = tr.log_prob;
      out.old_values(j) = tr.value_pred;
      ++j;
    }
  }
  out.advantages = adv.normalized;
  out.value_targets = adv.value_targets;
  out.returns = adv.returns;
  return out;
}

}  // namespace dpg
