#pragma once

#include <dpg/numerics/mlp.hpp>

#include <cstdint>

namespace dpg {

enum class InitScheme { orthogonal, default_uniform };

// Diagonal Gaussian policy with an MLP mean and a state-independent log
// standard deviation. `params` holds the mean-net parameters followed by
// log_std, so gradients and update steps are flat vectors of one length.
struct GaussianPolicy {
  MlpSpec mean_net;
  ParamVector params;

  static GaussianPolicy make(Index obs_dim, Index act_dim, const std::vector<Index>& hidden,
                             InitScheme init, std::uint64_t seed, double log_std_init = 0.0);

  Index obs_dim() const { return mean_net.input_size(); }
  Index act_dim() const { return mean_net.output_size(); }
  Index net_param_count() const { return mean_net.param_count(); }

  auto net_params() const { return params.head(mean_net.param_count()); }
  auto log_std() const { return params.tail(act_dim()); }
  auto log_std() { return params.tail(act_dim()); }

  void validate() const;
};

struct ValueFunction {
  MlpSpec net;
  ParamVector params;

  static ValueFunction make(Index obs_dim, const std::vector<Index>& hidden, InitScheme init,
                            std::uint64_t seed);
  void validate() const;
};

Vector policy_mean(const GaussianPolicy& policy, const Vector& state);
Matrix policy_means(const GaussianPolicy& policy, const Matrix& states);

double gaussian_log_density(const Vector& mean, const Vector& log_std, const Vector& action);

double log_prob(const GaussianPolicy& policy, const Vector& state, const Vector& action);
Vector log_probs(const GaussianPolicy& policy, const Matrix& states, const Matrix& actions);

// Gradient of log_prob with respect to policy.params.
ParamVector log_prob_grad(const GaussianPolicy& policy, const Vector& state, const Vector& action);

// sum_i weights_i * grad log pi(actions_i | states_i), one batched reverse pass.
ParamVector weighted_log_prob_grad(const GaussianPolicy& policy, const Matrix& states,
                                   const Matrix& actions, const Vector& weights);

struct ActionSample {
  Vector action;
  double log_prob = 0.0;
};

ActionSample sample_action(const GaussianPolicy& policy, const Vector& state, Rng& rng);
ActionSample sample_action(const GaussianPolicy& policy, const Vector& state, std::uint64_t seed);

// KL(p || q) between diagonal Gaussians.
double diag_gaussian_kl(const Vector& mean_p, const Vector& log_std_p, const Vector& mean_q,
                        const Vector& log_std_q);
double diag_gaussian_kl(const GaussianPolicy& p, const GaussianPolicy& q, const Vector& state);

// Per-state KL(p || q) over the columns of `states`.
Vector diag_gaussian_kls(const GaussianPolicy& p, const GaussianPolicy& q, const Matrix& states);

double entropy(const GaussianPolicy& policy);

double value(const ValueFunction& vf, const Vector& state);
Vector values(const ValueFunction& vf, const Matrix& states);

}  // namespace dpg
