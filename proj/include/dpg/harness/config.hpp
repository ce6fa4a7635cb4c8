#pragma once

#include <dpg/algo/agent.hpp>

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dpg {

using Json = nlohmann::json;

struct ExperimentConfig {
  AgentConfig agent;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  std::vector<double> lr_grid{3e-5, 1e-4, 3e-4};
  int diagnostics_cadence = 25;
  int final_reward_window = 10;
  // Ablation axes held at a fixed value instead of being varied.
  std::array<std::optional<bool>, OptimizationToggles::kAblationAxes> frozen_axes{};
  std::string output_dir = "runs";

  static ExperimentConfig defaults(Algorithm algorithm, EnvName env);

  // ppo_m with any ablation axis on, empty seeds, bad cadence, ... throw.
  void validate() const;
};

Json to_json(const EnvSpec& env);
Json to_json(const OptimizationToggles& toggles);
Json to_json(const AgentConfig& config);
Json to_json(const ExperimentConfig& config);

// Missing keys keep their defaults; unknown keys are rejected.
EnvSpec env_from_json(const Json& j);
OptimizationToggles toggles_from_json(const Json& j);
AgentConfig agent_config_from_json(const Json& j);
ExperimentConfig config_from_json(const Json& j);

ExperimentConfig load_config(const std::string& path);

// FNV-1a of the canonical JSON without output_dir; 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace dpg
