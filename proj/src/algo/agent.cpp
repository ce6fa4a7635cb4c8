#include <dpg/algo/agent.hpp>

#include <dpg/policy/advantages.hpp>

namespace dpg {

Algorithm parse_algorithm(const std::string& name) {
  if (name == "ppo") return Algorithm::ppo;
  if (name == "ppo_m") return Algorithm::ppo_m;
  if (name == "trpo") return Algorithm::trpo;
  throw InvalidArgument("unknown algorithm '" + name + "'");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::ppo: return "ppo";
    case Algorithm::ppo_m: return "ppo_m";
    case Algorithm::trpo: return "trpo";
  }
  return "ppo";
}

AgentConfig AgentConfig::defaults(Algorithm algorithm, EnvName env) {
  AgentConfig c;
  c.algorithm = algorithm;
  c.env = EnvSpec::make(env);
  switch (algorithm) {
    case Algorithm::ppo: c.toggles = OptimizationToggles::ppo_defaults(); break;
    case Algorithm::ppo_m: c.toggles = OptimizationToggles::none(); break;
    case Algorithm::trpo: c.toggles = OptimizationToggles::trpo_defaults(); break;
  }
  return c;
}

double AgentConfig::gamma() const { return algorithm == Algorithm::trpo ? trpo.gamma : ppo.gamma; }
double AgentConfig::lambda() const { return algorithm == Algorithm::trpo ? trpo.lambda : ppo.lambda; }
int AgentConfig::pairs_per_iter() const {
  return algorithm == Algorithm::trpo ? trpo.pairs_per_iter : ppo.pairs_per_iter;
}

void AgentConfig::validate() const {
  env.validate();
  toggles.validate();
  if (algorithm == Algorithm::trpo) trpo.validate(); else ppo.validate();
  if (algorithm == Algorithm::ppo_m) {
    for (int i = 0; i < OptimizationToggles::kAblationAxes; ++i) {
      if (toggles.axis(i)) {
        throw InvalidArgument(std::string("ppo_m requires toggle '") +
                              OptimizationToggles::kAxisNames[static_cast<std::size_t>(i)] +
                              "' to be off");
      }
    }
  }
  if (total_iterations < 0) throw InvalidArgument("total_iterations must be >= 0");
  for (auto w : policy_hidden) if (w < 1) throw InvalidArgument("hidden widths must be positive");
  for (auto w : value_hidden) if (w < 1) throw InvalidArgument("hidden widths must be positive");
}

bool operator==(const Agent& a, const Agent& b) {
  auto same = [](const AdamState& x, const AdamState& y) {
    return x.first_moment == y.first_moment && x.second_moment == y.second_moment &&
           x.step_count == y.step_count && x.base_lr == y.base_lr && x.anneal == y.anneal &&
           x.horizon == y.horizon;
  };
  return a.policy.mean_net == b.policy.mean_net && a.policy.params == b.policy.params &&
         a.value.net == b.value.net && a.value.params == b.value.params &&
         same(a.optimizers.policy, b.optimizers.policy) &&
         same(a.optimizers.value, b.optimizers.value) && a.preprocessor == b.preprocessor;
}

Agent make_agent(const AgentConfig& config, std::uint64_t seed) {
  config.validate();
  const InitScheme init =
      config.toggles.orthogonal_init ? InitScheme::orthogonal : InitScheme::default_uniform;
  const EnvSpec& env = config.env;
  Agent agent{GaussianPolicy::make(env.obs_dim, env.act_dim, config.policy_hidden, init,
                                   derive_seed(seed, 101)),
              ValueFunction::make(env.obs_dim, config.value_hidden, init, derive_seed(seed, 102)),
              {},
              Preprocessor(config.toggles, env.obs_dim, config.gamma())};
  const bool anneal = config.toggles.lr_annealing;
  const std::int64_t iters = std::max(config.total_iterations, 1);
  if (config.algorithm == Algorithm::trpo) {
    const auto& t = config.trpo;
    agent.optimizers.policy = AdamState::fresh(agent.policy.params.size(), t.value_lr);
    agent.optimizers.value = AdamState::fresh(agent.value.params.size(), t.value_lr, anneal,
                                              iters * t.value_epochs * t.value_minibatches);
  } else {
    const auto& p = config.ppo;
    agent.optimizers.policy = AdamState::fresh(agent.policy.params.size(), p.policy_lr, anneal,
                                               iters * p.policy_epochs * p.minibatches);
    agent.optimizers.value = AdamState::fresh(agent.value.params.size(), p.value_lr, anneal,
                                              iters * p.value_epochs * p.minibatches);
  }
  return agent;
}

TrainingBatch prepare_batch(const AgentConfig& config, const RolloutBatch& batch) {
  return make_training_batch(batch, gae_advantages(batch, config.gamma(), config.lambda()));
}

UpdateResult apply_update(const Agent& agent, const AgentConfig& config,
                          const TrainingBatch& training, std::uint64_t seed) {
  if (config.algorithm == Algorithm::trpo) {
    return trpo_step(agent.policy, agent.value, training, config.trpo, config.toggles,
                     agent.optimizers, seed);
  }
  return ppo_update(agent.policy, agent.value, training, config.ppo, config.toggles,
                    agent.optimizers, seed);
}

Iteration run_iteration(const Agent& agent, const AgentConfig& config, int iteration,
                        std::uint64_t seed) {
  Iteration out{agent, {}, {}, {}};
  const auto iter = static_cast<std::uint64_t>(iteration);
  out.batch = collect_rollouts(config.env, agent.policy, &agent.value, config.pairs_per_iter(),
                               derive_seed(seed, iter, 1), &out.agent.preprocessor);
  out.training = prepare_batch(config, out.batch);
  UpdateResult update = apply_update(out.agent, config, out.training, derive_seed(seed, iter, 2));
  out.agent.policy = std::move(update.policy);
  out.agent.value = std::move(update.value);
  out.agent.optimizers = std::move(update.optimizers);
  out.report = std::move(update.report);
  out.report.iteration = iteration;
  out.report.mean_reward = out.batch.mean_episode_reward();
  return out;
}

}  // namespace dpg
