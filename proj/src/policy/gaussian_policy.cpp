#include <dpg/policy/gaussian_policy.hpp>

#include <dpg/numerics/init.hpp>

#include <cmath>
#include <numbers>

namespace dpg {

namespace {

constexpr double kLogTwoPi = 1.8378770664093454836;  // ln(2 pi)

ParamVector init_net(const MlpSpec& spec, InitScheme init, std::uint64_t seed, double output_gain) {
  if (init == InitScheme::orthogonal) {
    const auto gains = standard_gains(spec, output_gain);
    return orthogonal_init(spec, gains, seed);
  }
  return default_init(spec, seed);
}

void check_state(const GaussianPolicy& policy, const Vector& state) {
  if (state.size() != policy.obs_dim()) throw InvalidArgument("policy: state dimension mismatch");
  require_finite(state, "policy state");
}

}  // namespace

GaussianPolicy GaussianPolicy::make(Index obs_dim, Index act_dim, const std::vector<Index>& hidden,
                                    InitScheme init, std::uint64_t seed, double log_std_init) {
  GaussianPolicy policy;
  policy.mean_net = MlpSpec::make(obs_dim, hidden, act_dim);
  const ParamVector net = init_net(policy.mean_net, init, seed, 0.01);
  policy.params.resize(net.size() + act_dim);
  policy.params << net, Vector::Constant(act_dim, log_std_init);
  return policy;
}

void GaussianPolicy::validate() const {
  mean_net.validate();
  if (params.size() != mean_net.param_count() + act_dim()) {
    throw InvalidArgument("GaussianPolicy: parameter vector length mismatch");
  }
  require_finite(params, "GaussianPolicy params");
}

ValueFunction ValueFunction::make(Index obs_dim, const std::vector<Index>& hidden, InitScheme init,
                                  std::uint64_t seed) {
  ValueFunction vf;
  vf.net = MlpSpec::make(obs_dim, hidden, 1);
  vf.params = init_net(vf.net, init, seed, 1.0);
  return vf;
}

void ValueFunction::validate() const {
  net.validate();
  if (net.output_size() != 1) throw InvalidArgument("ValueFunction: output width must be 1");
  if (params.size() != net.param_count()) throw InvalidArgument("ValueFunction: parameter length");
}

Vector policy_mean(const GaussianPolicy& policy, const Vector& state) {
  check_state(policy, state);
  return mlp_forward<double>(policy.mean_net, policy.net_params(), Matrix(state)).col(0);
}

Matrix policy_means(const GaussianPolicy& policy, const Matrix& states) {
  return mlp_forward<double>(policy.mean_net, policy.net_params(), states);
}

double gaussian_log_density(const Vector& mean, const Vector& log_std, const Vector& action) {
  const Vector z = (action - mean).cwiseQuotient(log_std.array().exp().matrix());
  return -0.5 * z.squaredNorm() - log_std.sum() -
         0.5 * static_cast<double>(mean.size()) * kLogTwoPi;
}

double log_prob(const GaussianPolicy& policy, const Vector& state, const Vector& action) {
  if (action.size() != policy.act_dim()) throw InvalidArgument("log_prob: action dimension mismatch");
  require_finite(action, "log_prob action");
  return gaussian_log_density(policy_mean(policy, state), policy.log_std(), action);
}

Vector log_probs(const GaussianPolicy& policy, const Matrix& states, const Matrix& actions) {
  if (actions.rows() != policy.act_dim() || actions.cols() != states.cols()) {
    throw InvalidArgument("log_probs: action shape mismatch");
  }
  const Matrix means = policy_means(policy, states);
  const Vector inv_std = (-policy.log_std().array()).exp();
  const Matrix z = (actions - means).array().colwise() * inv_std.array();
  const double norm = policy.log_std().sum() + 0.5 * static_cast<double>(policy.act_dim()) * kLogTwoPi;
  return (-0.5 * z.colwise().squaredNorm().array() - norm).matrix().transpose();
}

ParamVector weighted_log_prob_grad(const GaussianPolicy& policy, const Matrix& states,
                                   const Matrix& actions, const Vector& weights) {
  if (weights.size() != states.cols() || actions.cols() != states.cols()) {
    throw InvalidArgument("weighted_log_prob_grad: batch shape mismatch");
  }
  MlpTape<double> tape;
  const Matrix means = mlp_forward<double>(policy.mean_net, policy.net_params(), states, &tape);
  const Vector inv_var = (-2.0 * policy.log_std().array()).exp();
  const Matrix diff = actions - means;
  // d log pi / d mean = (a - mu) / sigma^2
  Matrix cot = diff.array().colwise() * inv_var.array();
  cot = cot.array().rowwise() * weights.transpose().array();
  ParamVector grad(policy.params.size());
  grad.head(policy.net_param_count()) =
      mlp_backward<double>(policy.mean_net, policy.net_params(), tape, cot);
  // d log pi / d log_std_j = (a_j - mu_j)^2 / sigma_j^2 - 1
  const Matrix std_terms =
      ((diff.array().square().colwise() * inv_var.array()) - 1.0).matrix();
  grad.tail(policy.act_dim()) = std_terms * weights;
  return grad;
}

ParamVector log_prob_grad(const GaussianPolicy& policy, const Vector& state, const Vector& action) {
  check_state(policy, state);
  return weighted_log_prob_grad(policy, Matrix(state), Matrix(action), Vector::Ones(1));
}

ActionSample sample_action(const GaussianPolicy& policy, const Vector& state, Rng& rng) {
  const Vector mean = policy_mean(policy, state);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(policy.act_dim());
  for (Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
  ActionSample out;
  out.action = mean + policy.log_std().array().exp().matrix().cwiseProduct(z);
  out.log_prob = gaussian_log_density(mean, policy.log_std(), out.action);
  return out;
}

ActionSample sample_action(const GaussianPolicy& policy, const Vector& state, std::uint64_t seed) {
  Rng rng(seed);
  return sample_action(policy, state, rng);
}

double diag_gaussian_kl(const Vector& mean_p, const Vector& log_std_p, const Vector& mean_q,
                        const Vector& log_std_q) {
  if (mean_p.size() != mean_q.size() || log_std_p.size() != mean_p.size() ||
      log_std_q.size() != mean_q.size()) {
    throw InvalidArgument("diag_gaussian_kl: dimension mismatch");
  }
  double kl = 0.0;
  for (Index i = 0; i < mean_p.size(); ++i) {
    const double var_p = std::exp(2.0 * log_std_p(i));
    const double var_q = std::exp(2.0 * log_std_q(i));
    const double d = mean_p(i) - mean_q(i);
    kl += log_std_q(i) - log_std_p(i) + (var_p + d * d) / (2.0 * var_q) - 0.5;
  }
  return std::max(kl, 0.0);
}

double diag_gaussian_kl(const GaussianPolicy& p, const GaussianPolicy& q, const Vector& state) {
  return diag_gaussian_kl(policy_mean(p, state), p.log_std(), policy_mean(q, state), q.log_std());
}

Vector diag_gaussian_kls(const GaussianPolicy& p, const GaussianPolicy& q, const Matrix& states) {
  if (p.act_dim() != q.act_dim()) throw InvalidArgument("diag_gaussian_kls: act_dim mismatch");
  const Matrix mp = policy_means(p, states);
  const Matrix mq = policy_means(q, states);
  const Vector var_p = (2.0 * p.log_std().array()).exp();
  const Vector inv_var_q = (-2.0 * q.log_std().array()).exp();
  const double log_term = (q.log_std() - p.log_std()).sum();
  const double var_term = 0.5 * var_p.cwiseProduct(inv_var_q).sum();
  const double half_d = 0.5 * static_cast<double>(p.act_dim());
  const Matrix d = mp - mq;
  Vector kls = (0.5 * (d.array().square().colwise() * inv_var_q.array()).colwise().sum())
                   .matrix()
                   .transpose();
  kls.array() += log_term + var_term - half_d;
  return kls.cwiseMax(0.0);
}

double entropy(const GaussianPolicy& policy) {
  const double per_dim = 0.5 * (kLogTwoPi + 1.0);
  return policy.log_std().sum() + per_dim * static_cast<double>(policy.act_dim());
}

double value(const ValueFunction& vf, const Vector& state) {
  if (state.size() != vf.net.input_size()) throw InvalidArgument("value: state dimension mismatch");
  return mlp_forward<double>(vf.net, vf.params, Matrix(state))(0, 0);
}

Vector values(const ValueFunction& vf, const Matrix& states) {
  return mlp_forward<double>(vf.net, vf.params, states).row(0).transpose();
}

}  // namespace dpg
