#pragma once

#include <dpg/core.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dpg {

enum class EnvName { point_mass, pendulum, cartpole_continuous };

EnvName parse_env_name(const std::string& name);
std::string to_string(EnvName name);

// Planar point mass pushed by a bounded force; state (x, y, vx, vy).
// reward = alive_bonus - position_cost |x|^2 - velocity_cost |v|^2 - action_cost |u|^2
struct PointMassParams {
  double dt = 0.1;
  double mass = 1.0;
  double max_force = 1.0;
  double position_limit = 2.0;  // walls: position clipped to the box, velocity zeroed
  double velocity_limit = 2.0;
  double init_position = 1.0;  // initial position uniform in [-init, init]^2, zero velocity
  double position_cost = 1.0;
  double velocity_cost = 0.0;
  double action_cost = 0.1;
  double alive_bonus = 0.0;
  int max_episode_length = 100;

  friend bool operator==(const PointMassParams&, const PointMassParams&) = default;
};

// Torque-driven pendulum, angle 0 upright; state (theta, theta_dot),
// observation (cos theta, sin theta, theta_dot).
// reward = upright_bonus - cost_scale (angle_cost th^2 + velocity_cost thd^2 + torque_cost u^2)
struct PendulumParams {
  double gravity = 10.0;
  double mass = 1.0;
  double length = 1.0;
  double dt = 0.05;
  double max_speed = 8.0;
  double max_torque = 2.0;
  double init_max_speed = 1.0;  // initial theta uniform in [-pi, pi], theta_dot in [-init, init]
  double upright_bonus = 1.0;
  double cost_scale = 1.0 / 16.2736044;  // maps the worst-case cost onto 1
  double angle_cost = 1.0;
  double velocity_cost = 0.1;
  double torque_cost = 0.001;
  int max_episode_length = 200;

  friend bool operator==(const PendulumParams&, const PendulumParams&) = default;
};

// Cart-pole balance with a continuous force in [-1, 1] * force_mag;
// state (x, x_dot, theta, theta_dot); reward alive_bonus per step until the
// pole falls past theta_limit or the cart leaves [-x_limit, x_limit].
struct CartpoleParams {
  double gravity = 9.8;
  double cart_mass = 1.0;
  double pole_mass = 0.1;
  double half_length = 0.5;
  double force_mag = 10.0;
  double dt = 0.02;
  double x_limit = 2.4;
  double theta_limit = 12.0 * 2.0 * 3.14159265358979323846 / 360.0;
  double init_range = 0.05;  // all state components uniform in [-init, init]
  double alive_bonus = 1.0;
  int max_episode_length = 200;

  friend bool operator==(const CartpoleParams&, const CartpoleParams&) = default;
};

struct EnvParams {
  PointMassParams point_mass;
  PendulumParams pendulum;
  CartpoleParams cartpole;

  friend bool operator==(const EnvParams&, const EnvParams&) = default;
};

struct EnvSpec {
  EnvName name = EnvName::point_mass;
  Index state_dim = 0;
  Index obs_dim = 0;
  Index act_dim = 0;
  int max_episode_length = 1;
  std::vector<std::pair<double, double>> action_bounds;
  EnvParams params;

  static EnvSpec make(EnvName name, const EnvParams& params = {});
  void validate() const;

  // Documented per-step reward range.
  std::pair<double, double> reward_bounds() const;

  friend bool operator==(const EnvSpec&, const EnvSpec&) = default;
};

struct EnvStep {
  Vector next_state;
  double reward = 0.0;
  bool done = false;  // physical termination; time limits are handled by rollouts
};

Vector env_reset(const EnvSpec& spec, std::uint64_t seed);
EnvStep env_step(const EnvSpec& spec, const Vector& state, const Vector& action);
Vector env_observe(const EnvSpec& spec, const Vector& state);

}  // namespace dpg
