#pragma once

#include <dpg/algo/agent.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

namespace dpg::testing {

inline Vector gaussian_vector(Index n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix m(rows, cols);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

// Central differences of a scalar function of a parameter vector.
inline Vector finite_difference(const std::function<double(const Vector&)>& f, const Vector& x,
                                double h = 1e-5) {
  Vector g(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = f(probe);
    probe(i) = x(i) - h;
    const double down = f(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

// Largest per-coordinate error relative to max(|a_i|, |b_i|, floor).
inline double max_relative_error(const Vector& a, const Vector& b, double floor = 1e-6) {
  double worst = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a(i)), std::abs(b(i)), floor});
    worst = std::max(worst, std::abs(a(i) - b(i)) / scale);
  }
  return worst;
}

// A small policy with a perturbed log_std and a batch of off-policy-ish pairs.
struct TinyProblem {
  GaussianPolicy policy;
  GaussianPolicy old_policy;
  TrainingBatch batch;
};

inline TinyProblem tiny_problem(std::uint64_t seed, Index obs_dim = 3, Index act_dim = 2,
                                Index pairs = 12, double drift = 0.05) {
  Rng rng(seed);
  TinyProblem p;
  p.old_policy = GaussianPolicy::make(obs_dim, act_dim, {5, 4}, InitScheme::default_uniform, seed);
  p.old_policy.log_std() = gaussian_vector(act_dim, rng, 0.3);
  p.policy = p.old_policy;
  p.policy.params += gaussian_vector(p.policy.params.size(), rng, drift);
  auto& b = p.batch;
  b.states = gaussian_matrix(obs_dim, pairs, rng);
  b.actions = policy_means(p.old_policy, b.states) + gaussian_matrix(act_dim, pairs, rng, 0.8);
  b.old_log_probs = log_probs(p.old_policy, b.states, b.actions);
  b.advantages = gaussian_vector(pairs, rng);
  b.old_values = gaussian_vector(pairs, rng);
  b.value_targets = b.old_values + gaussian_vector(pairs, rng);
  b.returns = b.value_targets;
  return p;
}

inline std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("dpg_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace dpg::testing
