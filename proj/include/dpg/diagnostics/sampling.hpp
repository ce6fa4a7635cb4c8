#pragma once

#include <dpg/algo/agent.hpp>
#include <dpg/policy/advantages.hpp>

#include <cstdint>
#include <string>

namespace dpg {

enum class Split { train, heldout };

std::string to_string(Split split);

// Rollouts from the agent's current policy with its preprocessing frozen, so
// measurements never disturb the agent.
RolloutBatch sample_batch(const Agent& agent, const AgentConfig& config, Index pair_budget,
                          std::uint64_t seed);

// Unclipped surrogate gradient at the policy that collected `batch`, with
// GAE against `values` and normalized advantages.
ParamVector surrogate_gradient(const GaussianPolicy& policy, const RolloutBatch& batch,
                               const BatchValues& values, double gamma, double lambda);

// Same, from `pair_budget` fresh pairs with the agent's value function.
ParamVector surrogate_gradient(const Agent& agent, const AgentConfig& config, Index pair_budget,
                               std::uint64_t seed);

}  // namespace dpg
