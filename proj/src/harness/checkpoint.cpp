#include <dpg/harness/checkpoint.hpp>

#include <dpg/harness/io.hpp>

namespace dpg {

namespace {

Json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from(const Json& j, Index expected, const char* what) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<Index>(values.size()) != expected) {
    throw InvalidArgument(std::string("checkpoint: ") + what + " has the wrong length");
  }
  return Eigen::Map<const Vector>(values.data(), expected);
}

Json adam_json(const AdamState& a) {
  return {{"first_moment", vector_json(a.first_moment)},
          {"second_moment", vector_json(a.second_moment)},
          {"step_count", a.step_count},
          {"base_lr", a.base_lr},
          {"anneal", a.anneal},
          {"horizon", a.horizon}};
}

AdamState adam_from(const Json& j, Index size) {
  AdamState a = AdamState::fresh(size, j.at("base_lr").get<double>(), j.at("anneal").get<bool>(),
                                 j.at("horizon").get<std::int64_t>());
  a.first_moment = vector_from(j.at("first_moment"), size, "first_moment");
  a.second_moment = vector_from(j.at("second_moment"), size, "second_moment");
  a.step_count = j.at("step_count").get<std::int64_t>();
  return a;
}

Json stats_json(const RunningStats& s) {
  return {{"count", s.count}, {"mean", s.mean}, {"sum_sq_dev", s.sum_sq_dev}};
}

RunningStats stats_from(const Json& j) {
  RunningStats s;
  s.count = j.at("count").get<std::int64_t>();
  s.mean = j.at("mean").get<double>();
  s.sum_sq_dev = j.at("sum_sq_dev").get<double>();
  return s;
}

}  // namespace

Json to_json(const Checkpoint& c) {
  Json obs = Json::array();
  for (const auto& s : c.agent.preprocessor.obs_stats()) obs.push_back(stats_json(s));
  return {
      {"config", to_json(c.config)},
      {"config_hash", c.config_hash},
      {"seed", c.seed},
      {"iteration", c.iteration},
      {"policy_params", vector_json(c.agent.policy.params)},
      {"policy_id", param_id(c.agent.policy.params)},
      {"value_params", vector_json(c.agent.value.params)},
      {"policy_optimizer", adam_json(c.agent.optimizers.policy)},
      {"value_optimizer", adam_json(c.agent.optimizers.value)},
      {"obs_stats", obs},
      {"reward_scaler",
       {{"running_return", c.agent.preprocessor.scaler().running_return},
        {"stats", stats_json(c.agent.preprocessor.scaler().stats)}}},
  };
}

Checkpoint checkpoint_from_json(const Json& j) {
  try {
    Checkpoint c;
    c.config = agent_config_from_json(j.at("config"));
    c.config_hash = j.at("config_hash").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.iteration = j.at("iteration").get<int>();
    c.agent = make_agent(c.config, c.seed);
    c.agent.policy.params = vector_from(j.at("policy_params"), c.agent.policy.params.size(), "policy_params");
    c.agent.value.params = vector_from(j.at("value_params"), c.agent.value.params.size(), "value_params");
    c.agent.optimizers.policy = adam_from(j.at("policy_optimizer"), c.agent.policy.params.size());
    c.agent.optimizers.value = adam_from(j.at("value_optimizer"), c.agent.value.params.size());
    const auto& obs = j.at("obs_stats");
    if (obs.size() != c.agent.preprocessor.obs_stats().size()) {
      throw InvalidArgument("checkpoint: obs_stats has the wrong length");
    }
    for (std::size_t i = 0; i < obs.size(); ++i) c.agent.preprocessor.obs_stats()[i] = stats_from(obs[i]);
    c.agent.preprocessor.scaler().running_return = j.at("reward_scaler").at("running_return").get<double>();
    c.agent.preprocessor.scaler().stats = stats_from(j.at("reward_scaler").at("stats"));
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("checkpoint: malformed: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  write_file_atomic(path, to_json(checkpoint).dump(1) + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
  try {
    return checkpoint_from_json(Json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("checkpoint '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace dpg
