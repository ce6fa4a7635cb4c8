#include <dpg/harness/config.hpp>

#include <fstream>
#include <set>

namespace dpg {

namespace {

// Reads fields of one JSON object, rejecting keys nobody asked for.
class Reader {
 public:
  Reader(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw InvalidArgument(where_ + ": expected an object");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw InvalidArgument(where_ + ": unknown key '" + key + "'");
    }
  }
  Reader(const Reader&) = delete;
  Reader& operator=(const Reader&) = delete;

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument(where_ + "." + key + ": " + e.what());
    }
  }
  const Json* child(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }
  const std::string& where() const { return where_; }

 private:
  const Json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

Json range_json(const std::optional<ClipRange>& r) {
  if (!r) return nullptr;
  return Json::array({r->low, r->high});
}

std::optional<ClipRange> range_from(const Json* j, const std::string& where) {
  if (!j || j->is_null()) return std::nullopt;
  if (!j->is_array() || j->size() != 2) throw InvalidArgument(where + ": expected [low, high] or null");
  return ClipRange{j->at(0).get<double>(), j->at(1).get<double>()};
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults(Algorithm algorithm, EnvName env) {
  ExperimentConfig c;
  c.agent = AgentConfig::defaults(algorithm, env);
  return c;
}

void ExperimentConfig::validate() const {
  agent.validate();
  if (seeds.empty()) throw InvalidArgument("config: seeds must be non-empty");
  if (lr_grid.empty()) throw InvalidArgument("config: lr_grid must be non-empty");
  for (double lr : lr_grid) if (!(lr > 0.0)) throw InvalidArgument("config: learning rates must be positive");
  if (diagnostics_cadence < 1) throw InvalidArgument("config: diagnostics_cadence must be >= 1");
  if (final_reward_window < 1) throw InvalidArgument("config: final_reward_window must be >= 1");
  if (output_dir.empty()) throw InvalidArgument("config: output_dir must be non-empty");
}

Json to_json(const EnvSpec& env) {
  const auto& pm = env.params.point_mass;
  const auto& pe = env.params.pendulum;
  const auto& cp = env.params.cartpole;
  return {
      {"name", to_string(env.name)},
      {"point_mass",
       {{"dt", pm.dt}, {"mass", pm.mass}, {"max_force", pm.max_force},
        {"position_limit", pm.position_limit}, {"velocity_limit", pm.velocity_limit},
        {"init_position", pm.init_position}, {"position_cost", pm.position_cost},
        {"velocity_cost", pm.velocity_cost}, {"action_cost", pm.action_cost},
        {"alive_bonus", pm.alive_bonus}, {"max_episode_length", pm.max_episode_length}}},
      {"pendulum",
       {{"gravity", pe.gravity}, {"mass", pe.mass}, {"length", pe.length}, {"dt", pe.dt},
        {"max_speed", pe.max_speed}, {"max_torque", pe.max_torque},
        {"init_max_speed", pe.init_max_speed}, {"upright_bonus", pe.upright_bonus},
        {"cost_scale", pe.cost_scale}, {"angle_cost", pe.angle_cost},
        {"velocity_cost", pe.velocity_cost}, {"torque_cost", pe.torque_cost},
        {"max_episode_length", pe.max_episode_length}}},
      {"cartpole_continuous",
       {{"gravity", cp.gravity}, {"cart_mass", cp.cart_mass}, {"pole_mass", cp.pole_mass},
        {"half_length", cp.half_length}, {"force_mag", cp.force_mag}, {"dt", cp.dt},
        {"x_limit", cp.x_limit}, {"theta_limit", cp.theta_limit}, {"init_range", cp.init_range},
        {"alive_bonus", cp.alive_bonus}, {"max_episode_length", cp.max_episode_length}}},
  };
}

EnvSpec env_from_json(const Json& j) {
  Reader r(j, "env");
  std::string name = "point_mass";
  r.get("name", name);
  EnvParams p;
  if (const Json* c = r.child("point_mass")) {
    Reader q(*c, "env.point_mass");
    auto& pm = p.point_mass;
    q.get("dt", pm.dt); q.get("mass", pm.mass); q.get("max_force", pm.max_force);
    q.get("position_limit", pm.position_limit); q.get("velocity_limit", pm.velocity_limit);
    q.get("init_position", pm.init_position); q.get("position_cost", pm.position_cost);
    q.get("velocity_cost", pm.velocity_cost); q.get("action_cost", pm.action_cost);
    q.get("alive_bonus", pm.alive_bonus); q.get("max_episode_length", pm.max_episode_length);
  }
  if (const Json* c = r.child("pendulum")) {
    Reader q(*c, "env.pendulum");
    auto& pe = p.pendulum;
    q.get("gravity", pe.gravity); q.get("mass", pe.mass); q.get("length", pe.length);
    q.get("dt", pe.dt); q.get("max_speed", pe.max_speed); q.get("max_torque", pe.max_torque);
    q.get("init_max_speed", pe.init_max_speed); q.get("upright_bonus", pe.upright_bonus);
    q.get("cost_scale", pe.cost_scale); q.get("angle_cost", pe.angle_cost);
    q.get("velocity_cost", pe.velocity_cost); q.get("torque_cost", pe.torque_cost);
    q.get("max_episode_length", pe.max_episode_length);
  }
  if (const Json* c = r.child("cartpole_continuous")) {
    Reader q(*c, "env.cartpole_continuous");
    auto& cp = p.cartpole;
    q.get("gravity", cp.gravity); q.get("cart_mass", cp.cart_mass); q.get("pole_mass", cp.pole_mass);
    q.get("half_length", cp.half_length); q.get("force_mag", cp.force_mag); q.get("dt", cp.dt);
    q.get("x_limit", cp.x_limit); q.get("theta_limit", cp.theta_limit);
    q.get("init_range", cp.init_range); q.get("alive_bonus", cp.alive_bonus);
    q.get("max_episode_length", cp.max_episode_length);
  }
  return EnvSpec::make(parse_env_name(name), p);
}

Json to_json(const OptimizationToggles& t) {
  return {{"value_clipping", t.value_clipping},
          {"reward_scaling", t.reward_scaling},
          {"orthogonal_init", t.orthogonal_init},
          {"lr_annealing", t.lr_annealing},
          {"reward_clip_range", range_json(t.reward_clip_range)},
          {"obs_normalization", t.obs_normalization},
          {"obs_clip_range", range_json(t.obs_clip_range)},
          {"global_grad_clip", t.global_grad_clip ? Json(*t.global_grad_clip) : Json(nullptr)}};
}

OptimizationToggles toggles_from_json(const Json& j) {
  OptimizationToggles t;
  Reader r(j, "toggles");
  r.get("value_clipping", t.value_clipping);
  r.get("reward_scaling", t.reward_scaling);
  r.get("orthogonal_init", t.orthogonal_init);
  r.get("lr_annealing", t.lr_annealing);
  r.get("obs_normalization", t.obs_normalization);
  t.reward_clip_range = range_from(r.child("reward_clip_range"), "toggles.reward_clip_range");
  t.obs_clip_range = range_from(r.child("obs_clip_range"), "toggles.obs_clip_range");
  if (const Json* g = r.child("global_grad_clip"); g && !g->is_null()) {
    t.global_grad_clip = g->get<double>();
  }
  t.validate();
  return t;
}

Json to_json(const AgentConfig& c) {
  const auto& p = c.ppo;
  const auto& t = c.trpo;
  return {
      {"algorithm", to_string(c.algorithm)},
      {"env", to_json(c.env)},
      {"toggles", to_json(c.toggles)},
      {"policy_network_hidden_layers", c.policy_hidden},
      {"value_network_hidden_layers", c.value_hidden},
      {"total_iterations", c.total_iterations},
      {"ppo",
       {{"timesteps_per_iteration", p.pairs_per_iter}, {"discount_factor", p.gamma},
        {"gae_discount", p.lambda}, {"value_network_lr", p.value_lr},
        {"value_network_num_epochs", p.value_epochs}, {"number_of_minibatches", p.minibatches},
        {"policy_lr", p.policy_lr}, {"policy_epochs", p.policy_epochs},
        {"entropy_coefficient", p.entropy_coef}, {"clipping_coefficient", p.clip_eps},
        {"value_clip_mode", p.value_clip_mode == ValueClipMode::min_of_branches ? "min" : "max"}}},
      {"trpo",
       {{"timesteps_per_iteration", t.pairs_per_iter}, {"discount_factor", t.gamma},
        {"gae_discount", t.lambda}, {"value_network_lr", t.value_lr},
        {"value_network_num_epochs", t.value_epochs}, {"number_of_minibatches", t.value_minibatches},
        {"kl_constraint", t.kl_delta}, {"fisher_estimation_fraction", t.fisher_fraction},
        {"conjugate_gradient_steps", t.cg_steps}, {"conjugate_gradient_damping", t.cg_damping},
        {"backtracking_steps", t.backtrack_steps}, {"backtracking_coefficient", t.backtrack_coef}}},
  };
}

AgentConfig agent_config_from_json(const Json& j) {
  Reader r(j, "config");
  std::string algorithm = "ppo";
  r.get("algorithm", algorithm);
  const Json* env = r.child("env");
  AgentConfig c = AgentConfig::defaults(parse_algorithm(algorithm),
                                        env ? env_from_json(*env).name : EnvName::point_mass);
  if (env) c.env = env_from_json(*env);
  if (const Json* t = r.child("toggles")) c.toggles = toggles_from_json(*t);
  r.get("policy_network_hidden_layers", c.policy_hidden);
  r.get("value_network_hidden_layers", c.value_hidden);
  r.get("total_iterations", c.total_iterations);
  if (const Json* pj = r.child("ppo")) {
    Reader q(*pj, "config.ppo");
    auto& p = c.ppo;
    q.get("timesteps_per_iteration", p.pairs_per_iter); q.get("discount_factor", p.gamma);
    q.get("gae_discount", p.lambda); q.get("value_network_lr", p.value_lr);
    q.get("value_network_num_epochs", p.value_epochs); q.get("number_of_minibatches", p.minibatches);
    q.get("policy_lr", p.policy_lr); q.get("policy_epochs", p.policy_epochs);
    q.get("entropy_coefficient", p.entropy_coef); q.get("clipping_coefficient", p.clip_eps);
    std::string mode = "min";
    q.get("value_clip_mode", mode);
    if (mode != "min" && mode != "max") throw InvalidArgument("config.ppo.value_clip_mode: expected min or max");
    p.value_clip_mode = mode == "min" ? ValueClipMode::min_of_branches : ValueClipMode::max_of_branches;
  }
  if (const Json* tj = r.child("trpo")) {
    Reader q(*tj, "config.trpo");
    auto& t = c.trpo;
    q.get("timesteps_per_iteration", t.pairs_per_iter); q.get("discount_factor", t.gamma);
    q.get("gae_discount", t.lambda); q.get("value_network_lr", t.value_lr);
    q.get("value_network_num_epochs", t.value_epochs); q.get("number_of_minibatches", t.value_minibatches);
    q.get("kl_constraint", t.kl_delta); q.get("fisher_estimation_fraction", t.fisher_fraction);
    q.get("conjugate_gradient_steps", t.cg_steps); q.get("conjugate_gradient_damping", t.cg_damping);
    q.get("backtracking_steps", t.backtrack_steps); q.get("backtracking_coefficient", t.backtrack_coef);
  }
  return c;
}

Json to_json(const ExperimentConfig& c) {
  Json j = to_json(c.agent);
  j["seeds"] = c.seeds;
  j["lr_grid"] = c.lr_grid;
  j["diagnostics_cadence"] = c.diagnostics_cadence;
  j["final_reward_window"] = c.final_reward_window;
  Json frozen = Json::object();
  for (int i = 0; i < OptimizationToggles::kAblationAxes; ++i) {
    const auto& f = c.frozen_axes[static_cast<std::size_t>(i)];
    if (f) frozen[OptimizationToggles::kAxisNames[static_cast<std::size_t>(i)]] = *f;
  }
  j["frozen_axes"] = frozen;
  j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("config: expected an object");
  Json agent_part = j;
  ExperimentConfig c;
  for (const char* key : {"seeds", "lr_grid", "diagnostics_cadence", "final_reward_window",
                          "frozen_axes", "output_dir"}) {
    agent_part.erase(key);
  }
  c.agent = agent_config_from_json(agent_part);
  Json rest = Json::object();
  for (const char* key : {"seeds", "lr_grid", "diagnostics_cadence", "final_reward_window",
                          "frozen_axes", "output_dir"}) {
    if (j.contains(key)) rest[key] = j.at(key);
  }
  {
    Reader r(rest, "config");
    r.get("seeds", c.seeds);
    r.get("lr_grid", c.lr_grid);
    r.get("diagnostics_cadence", c.diagnostics_cadence);
    r.get("final_reward_window", c.final_reward_window);
    r.get("output_dir", c.output_dir);
    if (const Json* f = r.child("frozen_axes")) {
      Reader q(*f, "config.frozen_axes");
      for (int i = 0; i < OptimizationToggles::kAblationAxes; ++i) {
        const char* name = OptimizationToggles::kAxisNames[static_cast<std::size_t>(i)];
        bool value = false;
        if (f->contains(name)) {
          q.get(name, value);
          c.frozen_axes[static_cast<std::size_t>(i)] = value;
        } else {
          q.get(name, value);
        }
      }
    }
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ExperimentConfig& config) {
  Json j = to_json(config);
  j.erase("output_dir");
  const std::string canonical = j.dump();
  return hex64(fnv1a(canonical.data(), canonical.size()));
}

}  // namespace dpg
