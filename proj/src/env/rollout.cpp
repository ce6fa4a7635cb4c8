#include <dpg/env/rollout.hpp>

namespace dpg {

std::vector<double> RolloutBatch::episode_rewards() const {
  std::vector<double> out;
  for (const auto& t : trajectories)
    if (t.complete) out.push_back(t.total_reward);
  if (out.empty())
    for (const auto& t : trajectories) out.push_back(t.total_reward);
  return out;
}

double RolloutBatch::mean_episode_reward() const {
  const auto rewards = episode_rewards();
  if (rewards.empty()) return 0.0;
  double s = 0.0;
  for (double r : rewards) s += r;
  return s / static_cast<double>(rewards.size());
}

Matrix RolloutBatch::states() const {
  if (trajectories.empty()) return Matrix();
  const Index dim = trajectories.front().transitions.front().state.size();
  Matrix out(dim, pair_count);
  Index j = 0;
  for (const auto& traj : trajectories)
    for (const auto& tr : traj.transitions) out.col(j++) = tr.state;
  return out;
}

Matrix RolloutBatch::actions() const {
  if (trajectories.empty()) return Matrix();
  const Index dim = trajectories.front().transitions.front().action.size();
  Matrix out(dim, pair_count);
  Index j = 0;
  for (const auto& traj : trajectories)
    for (const auto& tr : traj.transitions) out.col(j++) = tr.action;
  return out;
}

void assign_value_predictions(RolloutBatch& batch, const ValueFunction* vf) {
  if (batch.pair_count == 0) return;
  Vector preds = Vector::Zero(batch.pair_count);
  if (vf) preds = values(*vf, batch.states());
  Index j = 0;
  for (auto& traj : batch.trajectories) {
    for (auto& tr : traj.transitions) tr.value_pred = preds(j++);
    traj.bootstrap_value = 0.0;
    if (traj.truncated && vf) traj.bootstrap_value = value(*vf, traj.transitions.back().next_state);
  }
}

RolloutBatch collect_rollouts(const EnvSpec& spec, const GaussianPolicy& policy,
                              const ValueFunction* value_fn, Index pair_budget,
                              std::uint64_t seed, Preprocessor* preprocessor) {
  spec.validate();
  if (pair_budget < 1) throw InvalidArgument("collect_rollouts: pair_budget must be >= 1");
  if (policy.obs_dim() != spec.obs_dim || policy.act_dim() != spec.act_dim) {
    throw InvalidArgument("collect_rollouts: policy dimensions do not match " + to_string(spec.name));
  }
  if (value_fn && value_fn->net.input_size() != spec.obs_dim) {
    throw InvalidArgument("collect_rollouts: value function input does not match environment");
  }
  Preprocessor identity;
  Preprocessor& pre = preprocessor ? *preprocessor : identity;

  RolloutBatch batch;
  batch.policy_snapshot_id = param_id(policy.params);
  Rng action_rng(derive_seed(seed, 1));
  std::uint64_t episode = 0;
  while (batch.pair_count < pair_budget) {
    Trajectory traj;
    pre.start_episode();
    Vector state = env_reset(spec, derive_seed(seed, 2, episode++));
    Vector obs = pre.observation(env_observe(spec, state));
    bool terminated = false;
    for (int t = 0; t < spec.max_episode_length; ++t) {
      Transition tr;
      tr.state = obs;
      auto sample = sample_action(policy, obs, action_rng);
      EnvStep step = env_step(spec, state, sample.action);
      tr.action = std::move(sample.action);
      tr.log_prob = sample.log_prob;
      tr.reward = step.reward;
      tr.scaled_reward = pre.reward(step.reward);
      terminated = step.done;
      tr.done = step.done || t + 1 == spec.max_episode_length;
      state = std::move(step.next_state);
      obs = pre.observation(env_observe(spec, state));
      tr.next_state = obs;
      traj.total_reward += tr.reward;
      traj.transitions.push_back(std::move(tr));
      batch.pair_count += 1;
      if (traj.transitions.back().done || batch.pair_count == pair_budget) break;
    }
    traj.complete = traj.transitions.back().done;
    traj.truncated = !terminated;
    batch.trajectories.push_back(std::move(traj));
  }
  assign_value_predictions(batch, value_fn);
  return batch;
}

}  // namespace dpg
