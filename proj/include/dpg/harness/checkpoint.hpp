#pragma once

#include <dpg/harness/config.hpp>

#include <cstdint>
#include <string>

namespace dpg {

// Full learner state at an iteration boundary: parameters, Adam moments and
// preprocessing statistics, with the config that produced it.
struct Checkpoint {
  AgentConfig config;
  std::string config_hash;
  std::uint64_t seed = 0;
  int iteration = 0;  // number of completed updates
  Agent agent;
};

Json to_json(const Checkpoint& checkpoint);
Checkpoint checkpoint_from_json(const Json& j);

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace dpg
