#include <dpg/diagnostics/sampling.hpp>

#include <dpg/algo/objectives.hpp>

namespace dpg {

std::string to_string(Split split) { return split == Split::train ? "train" : "heldout"; }

RolloutBatch sample_batch(const Agent& agent, const AgentConfig& config, Index pair_budget,
                          std::uint64_t seed) {
  Preprocessor frozen = agent.preprocessor.frozen();
  return collect_rollouts(config.env, agent.policy, &agent.value, pair_budget, seed, &frozen);
}

ParamVector surrogate_gradient(const GaussianPolicy& policy, const RolloutBatch& batch,
                               const BatchValues& values, double gamma, double lambda) {
  const TrainingBatch training = make_training_batch(batch, gae_advantages(batch, values, gamma, lambda));
  return surrogate_and_grad(policy, training, false, 0.0).grad;
}

ParamVector surrogate_gradient(const Agent& agent, const AgentConfig& config, Index pair_budget,
                               std::uint64_t seed) {
  const RolloutBatch batch = sample_batch(agent, config, pair_budget, seed);
  return surrogate_gradient(agent.policy, batch, stored_values(batch), config.gamma(),
                            config.lambda());
}

}  // namespace dpg
