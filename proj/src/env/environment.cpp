#include <dpg/env/environment.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dpg {

EnvName parse_env_name(const std::string& name) {
  if (name == "point_mass") return EnvName::point_mass;
  if (name == "pendulum") return EnvName::pendulum;
  if (name == "cartpole_continuous") return EnvName::cartpole_continuous;
  throw InvalidArgument("unknown environment '" + name + "'");
}

std::string to_string(EnvName name) {
  switch (name) {
    case EnvName::point_mass: return "point_mass";
    case EnvName::pendulum: return "pendulum";
    case EnvName::cartpole_continuous: return "cartpole_continuous";
  }
  throw InvalidArgument("unknown environment");
}

EnvSpec EnvSpec::make(EnvName name, const EnvParams& params) {
  EnvSpec spec;
  spec.name = name;
  spec.params = params;
  switch (name) {
    case EnvName::point_mass:
      spec.state_dim = 4;
      spec.obs_dim = 4;
      spec.act_dim = 2;
      spec.max_episode_length = params.point_mass.max_episode_length;
      spec.action_bounds.assign(2, {-params.point_mass.max_force, params.point_mass.max_force});
      break;
    case EnvName::pendulum:
      spec.state_dim = 2;
      spec.obs_dim = 3;
      spec.act_dim = 1;
      spec.max_episode_length = params.pendulum.max_episode_length;
      spec.action_bounds.assign(1, {-params.pendulum.max_torque, params.pendulum.max_torque});
      break;
    case EnvName::cartpole_continuous:
      spec.state_dim = 4;
      spec.obs_dim = 4;
      spec.act_dim = 1;
      spec.max_episode_length = params.cartpole.max_episode_length;
      spec.action_bounds.assign(1, {-1.0, 1.0});
      break;
  }
  spec.validate();
  return spec;
}

void EnvSpec::validate() const {
  const EnvSpec ref = [&] {
    EnvSpec s;
    switch (name) {
      case EnvName::point_mass: s.state_dim = 4, s.obs_dim = 4, s.act_dim = 2; break;
      case EnvName::pendulum: s.state_dim = 2, s.obs_dim = 3, s.act_dim = 1; break;
      case EnvName::cartpole_continuous: s.state_dim = 4, s.obs_dim = 4, s.act_dim = 1; break;
      default: throw InvalidArgument("EnvSpec: unknown environment");
    }
    return s;
  }();
  if (state_dim != ref.state_dim || obs_dim != ref.obs_dim || act_dim != ref.act_dim) {
    throw InvalidArgument("EnvSpec: dimensions inconsistent with " + to_string(name));
  }
  if (max_episode_length < 1) throw InvalidArgument("EnvSpec: max_episode_length must be >= 1");
  if (static_cast<Index>(action_bounds.size()) != act_dim) {
    throw InvalidArgument("EnvSpec: one action bound per dimension");
  }
  for (const auto& [lo, hi] : action_bounds) {
    if (!(lo < hi)) throw InvalidArgument("EnvSpec: action bounds need low < high");
  }
}

std::pair<double, double> EnvSpec::reward_bounds() const {
  switch (name) {
    case EnvName::point_mass: {
      const auto& p = params.point_mass;
      const double worst = p.position_cost * 2.0 * p.position_limit * p.position_limit +
                           p.velocity_cost * 2.0 * p.velocity_limit * p.velocity_limit +
                           p.action_cost * 2.0 * p.max_force * p.max_force;
      return {p.alive_bonus - worst, p.alive_bonus};
    }
    case EnvName::pendulum: {
      const auto& p = params.pendulum;
      const double pi = std::numbers::pi;
      const double worst = p.cost_scale * (p.angle_cost * pi * pi +
                                           p.velocity_cost * p.max_speed * p.max_speed +
                                           p.torque_cost * p.max_torque * p.max_torque);
      return {p.upright_bonus - worst, p.upright_bonus};
    }
    case EnvName::cartpole_continuous:
      return {std::min(0.0, params.cartpole.alive_bonus), std::max(0.0, params.cartpole.alive_bonus)};
  }
  throw InvalidArgument("EnvSpec: unknown environment");
}

namespace {

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta + std::numbers::pi, two_pi);
  if (t < 0.0) t += two_pi;
  return t - std::numbers::pi;
}

void check_dims(const EnvSpec& spec, const Vector& state, const Vector& action) {
  if (state.size() != spec.state_dim) throw InvalidArgument("env_step: state dimension mismatch");
  if (action.size() != spec.act_dim) throw InvalidArgument("env_step: action dimension mismatch");
  require_finite(state, "env_step state");
  require_finite(action, "env_step action");
}

Vector clip_action(const EnvSpec& spec, const Vector& action) {
  Vector a = action;
  for (Index i = 0; i < a.size(); ++i) {
    const auto [lo, hi] = spec.action_bounds[static_cast<std::size_t>(i)];
    a(i) = std::clamp(a(i), lo, hi);
  }
  return a;
}

EnvStep step_point_mass(const PointMassParams& p, const Vector& s, const Vector& u) {
  EnvStep out;
  Vector next = s;
  for (int d = 0; d < 2; ++d) {
    double v = s(2 + d) + p.dt * u(d) / p.mass;
    v = std::clamp(v, -p.velocity_limit, p.velocity_limit);
    double x = s(d) + p.dt * v;
    if (x > p.position_limit || x < -p.position_limit) {
      x = std::clamp(x, -p.position_limit, p.position_limit);
      v = 0.0;
    }
    next(d) = x;
    next(2 + d) = v;
  }
  out.reward = p.alive_bonus - p.position_cost * s.head(2).squaredNorm() -
               p.velocity_cost * s.tail(2).squaredNorm() - p.action_cost * u.squaredNorm();
  out.next_state = std::move(next);
  return out;
}

EnvStep step_pendulum(const PendulumParams& p, const Vector& s, const Vector& u) {
  const double theta = s(0);
  const double theta_dot = s(1);
  const double torque = u(0);
  const double th = wrap_angle(theta);
  const double cost = p.angle_cost * th * th + p.velocity_cost * theta_dot * theta_dot +
                      p.torque_cost * torque * torque;
  double new_theta_dot =
      theta_dot + (3.0 * p.gravity / (2.0 * p.length) * std::sin(theta) +
                   3.0 / (p.mass * p.length * p.length) * torque) * p.dt;
  new_theta_dot = std::clamp(new_theta_dot, -p.max_speed, p.max_speed);
  const double new_theta = wrap_angle(theta + new_theta_dot * p.dt);
  EnvStep out;
  out.next_state = Vector(2);
  out.next_state << new_theta, new_theta_dot;
  out.reward = p.upright_bonus - p.cost_scale * cost;
  return out;
}

EnvStep step_cartpole(const CartpoleParams& p, const Vector& s, const Vector& u) {
  const double x = s(0), x_dot = s(1), theta = s(2), theta_dot = s(3);
  const double force = p.force_mag * u(0);
  const double total_mass = p.cart_mass + p.pole_mass;
  const double polemass_length = p.pole_mass * p.half_length;
  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);
  const double temp = (force + polemass_length * theta_dot * theta_dot * sin_t) / total_mass;
  const double theta_acc =
      (p.gravity * sin_t - cos_t * temp) /
      (p.half_length * (4.0 / 3.0 - p.pole_mass * cos_t * cos_t / total_mass));
  const double x_acc = temp - polemass_length * theta_acc * cos_t / total_mass;
  EnvStep out;
  out.next_state = Vector(4);
  out.next_state << x + p.dt * x_dot, x_dot + p.dt * x_acc, theta + p.dt * theta_dot,
      theta_dot + p.dt * theta_acc;
  out.done = std::abs(out.next_state(0)) > p.x_limit || std::abs(out.next_state(2)) > p.theta_limit;
  out.reward = p.alive_bonus;
  return out;
}

}  // namespace

Vector env_reset(const EnvSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  switch (spec.name) {
    case EnvName::point_mass: {
      const double r = spec.params.point_mass.init_position;
      std::uniform_real_distribution<double> pos(-r, r);
      Vector s = Vector::Zero(4);
      s(0) = pos(rng);
      s(1) = pos(rng);
      return s;
    }
    case EnvName::pendulum: {
      std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
      const double w = spec.params.pendulum.init_max_speed;
      std::uniform_real_distribution<double> speed(-w, w);
      Vector s(2);
      s(0) = angle(rng);
      s(1) = speed(rng);
      return s;
    }
    case EnvName::cartpole_continuous: {
      const double r = spec.params.cartpole.init_range;
      std::uniform_real_distribution<double> u(-r, r);
      Vector s(4);
      for (Index i = 0; i < 4; ++i) s(i) = u(rng);
      return s;
    }
  }
  throw InvalidArgument("env_reset: unknown environment");
}

EnvStep env_step(const EnvSpec& spec, const Vector& state, const Vector& action) {
  check_dims(spec, state, action);
  const Vector u = clip_action(spec, action);
  switch (spec.name) {
    case EnvName::point_mass: return step_point_mass(spec.params.point_mass, state, u);
    case EnvName::pendulum: return step_pendulum(spec.params.pendulum, state, u);
    case EnvName::cartpole_continuous: return step_cartpole(spec.params.cartpole, state, u);
  }
  throw InvalidArgument("env_step: unknown environment");
}

Vector env_observe(const EnvSpec& spec, const Vector& state) {
  if (state.size() != spec.state_dim) throw InvalidArgument("env_observe: state dimension mismatch");
  if (spec.name == EnvName::pendulum) {
    Vector obs(3);
    obs << std::cos(state(0)), std::sin(state(0)), state(1);
    return obs;
  }
  return state;
}

}  // namespace dpg
