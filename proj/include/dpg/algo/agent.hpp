#pragma once

#include <dpg/algo/updates.hpp>
#include <dpg/env/rollout.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace dpg {

enum class Algorithm { ppo, ppo_m, trpo };

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm algorithm);

// Everything needed to build and step one learner.
struct AgentConfig {
  Algorithm algorithm = Algorithm::ppo;
  EnvSpec env = EnvSpec::make(EnvName::point_mass);
  OptimizationToggles toggles = OptimizationToggles::ppo_defaults();
  PpoConfig ppo;
  TrpoConfig trpo;
  std::vector<Index> policy_hidden{64, 64};
  std::vector<Index> value_hidden{64, 64};
  int total_iterations = 100;

  static AgentConfig defaults(Algorithm algorithm, EnvName env);

  double gamma() const;
  double lambda() const;
  int pairs_per_iter() const;
  void validate() const;

  friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

struct Agent {
  GaussianPolicy policy;
  ValueFunction value;
  Optimizers optimizers;
  Preprocessor preprocessor;

  friend bool operator==(const Agent& a, const Agent& b);
};

Agent make_agent(const AgentConfig& config, std::uint64_t seed);

struct Iteration {
  Agent agent;         // after the update
  StepReport report;
  RolloutBatch batch;  // collected under the pre-update agent
  TrainingBatch training;
};

// Rollouts under `agent`, stored-value GAE, then one algorithm update.
TrainingBatch prepare_batch(const AgentConfig& config, const RolloutBatch& batch);
Iteration run_iteration(const Agent& agent, const AgentConfig& config, int iteration,
                        std::uint64_t seed);

// The update rule alone on a prepared batch.
UpdateResult apply_update(const Agent& agent, const AgentConfig& config,
                          const TrainingBatch& training, std::uint64_t seed);

}  // namespace dpg
