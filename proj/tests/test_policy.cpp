#include "support.hpp"

#include <dpg/policy/advantages.hpp>

#include <doctest.h>

#include <numbers>

using namespace dpg;
using namespace dpg::testing;

namespace {

GaussianPolicy zero_mean_policy(Index obs_dim, Index act_dim) {
  GaussianPolicy p = GaussianPolicy::make(obs_dim, act_dim, {4}, InitScheme::orthogonal, 0);
  p.params.setZero();
  return p;
}

Trajectory make_trajectory(const std::vector<double>& rewards, bool terminal,
                           const std::vector<double>& values = {}, double bootstrap = 0.0) {
  Trajectory tr;
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    Transition tn;
    tn.state = Vector::Constant(1, static_cast<double>(t));
    tn.action = Vector::Zero(1);
    tn.next_state = tn.state;
    tn.reward = rewards[t];
    tn.scaled_reward = rewards[t];
    tn.value_pred = values.empty() ? 0.0 : values[t];
    tr.total_reward += rewards[t];
    tr.transitions.push_back(tn);
  }
  tr.transitions.back().done = terminal;
  tr.truncated = !terminal;
  tr.complete = terminal;
  tr.bootstrap_value = bootstrap;
  return tr;
}

RolloutBatch batch_of(std::vector<Trajectory> trajectories) {
  RolloutBatch b;
  for (const auto& tr : trajectories) b.pair_count += tr.size();
  b.trajectories = std::move(trajectories);
  return b;
}

// A_t written out as the explicit double sum over TD residuals.
Vector gae_double_sum(const Trajectory& tr, double gamma, double lambda) {
  const Index n = tr.size();
  Vector delta(n);
  for (Index t = 0; t < n; ++t) {
    const auto& tn = tr.transitions[static_cast<std::size_t>(t)];
    double next = 0.0;
    if (t + 1 < n) next = tr.transitions[static_cast<std::size_t>(t + 1)].value_pred;
    else if (tr.truncated) next = tr.bootstrap_value;
    delta(t) = tn.scaled_reward + gamma * next - tn.value_pred;
  }
  Vector adv = Vector::Zero(n);
  for (Index t = 0; t < n; ++t) {
    for (Index l = 0; t + l < n; ++l) adv(t) += std::pow(gamma * lambda, static_cast<double>(l)) * delta(t + l);
  }
  return adv;
}

}  // namespace

TEST_CASE("log_prob at the mode of a standard normal") {
  for (Index d : {1, 2, 5}) {
    const GaussianPolicy p = zero_mean_policy(3, d);
    const double lp = log_prob(p, Vector::Ones(3), Vector::Zero(d));
    CHECK(lp == doctest::Approx(-0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(lp == log_prob(p, Vector::Ones(3), Vector::Zero(d)));
  }
}

TEST_CASE("log_prob gradient matches finite differences") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    GaussianPolicy p = GaussianPolicy::make(3, 2, {6, 5}, InitScheme::default_uniform, static_cast<std::uint64_t>(trial));
    p.log_std() = gaussian_vector(2, rng, 0.3);
    const Vector s = gaussian_vector(3, rng);
    const Vector a = gaussian_vector(2, rng);
    const ParamVector g = log_prob_grad(p, s, a);
    const Vector fd = finite_difference(
        [&](const Vector& q) {
          GaussianPolicy probe = p;
          probe.params = q;
          return log_prob(probe, s, a);
        },
        p.params);
    CHECK(max_relative_error(g, fd, 1e-4) < 1e-4);
  }
}

TEST_CASE("log_prob is maximized at the mean action") {
  GaussianPolicy p = GaussianPolicy::make(2, 1, {4}, InitScheme::orthogonal, 3);
  p.params += Vector::Constant(p.params.size(), 0.1);
  const Vector s = Vector::Constant(2, 0.4);
  const double mean = policy_mean(p, s)(0);
  double best_a = 0.0, best = -1e300;
  for (int i = -2000; i <= 2000; ++i) {
    const double a = mean + i * 1e-3;
    const double lp = log_prob(p, s, Vector::Constant(1, a));
    if (lp > best) best = lp, best_a = a;
  }
  CHECK(std::abs(best_a - mean) < 1e-9);
  CHECK_THROWS_AS(log_prob(p, Vector::Constant(2, std::nan("")), Vector::Zero(1)), InvalidArgument);
  CHECK_THROWS_AS(log_prob(p, Vector::Zero(3), Vector::Zero(1)), InvalidArgument);
}

TEST_CASE("sample_action: deterministic limit, reproducibility, log_prob consistency") {
  GaussianPolicy p = GaussianPolicy::make(2, 2, {4}, InitScheme::orthogonal, 3);
  const Vector s = Vector::Constant(2, 0.3);
  const auto a = sample_action(p, s, std::uint64_t{42});
  const auto b = sample_action(p, s, std::uint64_t{42});
  CHECK(a.action == b.action);
  CHECK(std::abs(a.log_prob - log_prob(p, s, a.action)) < 1e-9);

  p.log_std().setConstant(-20.0);
  const auto sharp = sample_action(p, s, std::uint64_t{7});
  CHECK((sharp.action - policy_mean(p, s)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sample_action moments over 1e5 draws") {
  GaussianPolicy p = zero_mean_policy(1, 2);
  const Index bias = p.mean_net.layout().back().bias_offset;
  p.params(bias) = 1.5;
  p.params(bias + 1) = -0.5;
  p.log_std() << std::log(0.7), std::log(2.0);
  Rng rng(11);
  RunningStats s0, s1;
  for (int i = 0; i < 100000; ++i) {
    const auto smp = sample_action(p, Vector::Zero(1), rng);
    s0.add(smp.action(0));
    s1.add(smp.action(1));
  }
  CHECK(std::abs(s0.mean - 1.5) < 0.02 * 1.5);
  CHECK(std::abs(s1.mean + 0.5) < 0.02 * 0.5 + 0.01);
  CHECK(std::abs(s0.stddev() - 0.7) < 0.02 * 0.7);
  CHECK(std::abs(s1.stddev() - 2.0) < 0.02 * 2.0);
}

TEST_CASE("diag_gaussian_kl closed forms") {
  const Vector zero = Vector::Zero(3);
  CHECK(diag_gaussian_kl(zero, zero, zero, zero) == 0.0);
  Vector shifted = zero;
  shifted(1) = 1.0;
  CHECK(diag_gaussian_kl(shifted, zero, zero, zero) == doctest::Approx(0.5).epsilon(1e-15));
  const Vector m = Vector::Zero(1);
  const double expected = std::log(1.0 / 2.0) + 4.0 / 2.0 - 0.5;
  CHECK(diag_gaussian_kl(m, Vector::Constant(1, std::log(2.0)), m, Vector::Zero(1)) ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK(expected == doctest::Approx(2.0 - std::log(2.0) - 0.5));
}

TEST_CASE("diag_gaussian_kl is non-negative and zero only at coincidence") {
  Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const Vector mp = gaussian_vector(3, rng), mq = gaussian_vector(3, rng);
    const Vector lp = gaussian_vector(3, rng, 0.5), lq = gaussian_vector(3, rng, 0.5);
    CHECK(diag_gaussian_kl(mp, lp, mq, lq) > 0.0);
    CHECK(std::abs(diag_gaussian_kl(mp, lp, mp, lp)) <= 1e-9);
  }
  const GaussianPolicy p = GaussianPolicy::make(2, 2, {4}, InitScheme::orthogonal, 1);
  CHECK(diag_gaussian_kl(p, p, Vector::Ones(2)) == 0.0);
}

TEST_CASE("likelihood ratios are one when parameters are equal") {
  const auto prob = tiny_problem(3);
  const Vector lp = log_probs(prob.old_policy, prob.batch.states, prob.batch.actions);
  CHECK(((lp - prob.batch.old_log_probs).array().exp() == 1.0).all());
}

TEST_CASE("discounted_returns hand recursions") {
  const Trajectory ones = make_trajectory({1, 1, 1}, true);
  const Vector r = discounted_returns(ones, 0.5, 123.0);
  CHECK(r(0) == 1.75);
  CHECK(r(1) == 1.5);
  CHECK(r(2) == 1.0);

  const Trajectory cut = make_trajectory({0, 0}, false);
  const Vector b = discounted_returns(cut, 0.99, 10.0);
  CHECK(b(0) == doctest::Approx(9.801).epsilon(1e-14));
  CHECK(b(1) == doctest::Approx(9.9).epsilon(1e-14));

  const Trajectory many = make_trajectory({3, -2, 5, 1}, true);
  const Vector myopic = discounted_returns(many, 1e-12, 0.0);
  for (Index t = 0; t < 4; ++t) CHECK(std::abs(myopic(t) - many.transitions[static_cast<std::size_t>(t)].reward) < 1e-10);

  CHECK_THROWS_AS(discounted_returns(many, 0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(discounted_returns(many, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(discounted_returns(Trajectory{}, 0.5, 0.0), InvalidArgument);
}

TEST_CASE("GAE: lambda 0 gives the TD residuals exactly") {
  const Trajectory tr = make_trajectory({1, 2, 3}, false, {0.5, -0.25, 2.0}, 4.0);
  const RolloutBatch b = batch_of({tr});
  const double g = 0.9;
  const AdvantageSet adv = gae_advantages(b, stored_values(b), g, 0.0);
  CHECK(adv.advantages(0) == 1.0 + g * -0.25 - 0.5);
  CHECK(adv.advantages(1) == 2.0 + g * 2.0 - -0.25);
  CHECK(adv.advantages(2) == 3.0 + g * 4.0 - 2.0);
}

TEST_CASE("GAE: lambda 1 with zero values equals discounted returns") {
  const Trajectory tr = make_trajectory({1, -2, 0.5, 4}, true);
  const RolloutBatch b = batch_of({tr});
  const AdvantageSet adv = gae_advantages(b, zero_values(b), 0.97, 1.0);
  CHECK(adv.advantages == discounted_returns(tr, 0.97, 0.0));
  CHECK(adv.returns == discounted_returns(tr, 0.97, 0.0));

  const AdvantageSet undiscounted = gae_advantages(b, zero_values(b), 1.0, 1.0);
  CHECK(undiscounted.advantages(0) == 3.5);
  CHECK(undiscounted.advantages(1) == 2.5);
  CHECK(undiscounted.advantages(2) == 4.5);
  CHECK(undiscounted.advantages(3) == 4.0);
}

TEST_CASE("GAE: 3-step hand case matches the explicit double sum") {
  const Trajectory tr = make_trajectory({1, 2, 3}, true, {0.5, 0.5, 0.5});
  const RolloutBatch b = batch_of({tr});
  const AdvantageSet adv = gae_advantages(b, stored_values(b), 0.9, 0.8);
  const Vector oracle = gae_double_sum(tr, 0.9, 0.8);
  CHECK((adv.advantages - oracle).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(adv.value_targets == (adv.advantages.array() + 0.5).matrix());
}

TEST_CASE("GAE: random trajectories match the double sum and targets are V_old + A") {
  Rng rng(17);
  std::uniform_int_distribution<int> len(1, 20);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Trajectory> trs;
    for (int k = 0; k < 3; ++k) {
      const int n = len(rng);
      const Vector r = gaussian_vector(n, rng), v = gaussian_vector(n, rng);
      trs.push_back(make_trajectory(std::vector<double>(r.data(), r.data() + n), coin(rng),
                                    std::vector<double>(v.data(), v.data() + n), gaussian_vector(1, rng)(0)));
    }
    const RolloutBatch b = batch_of(trs);
    const double g = unit(rng), l = unit(rng);
    const AdvantageSet adv = gae_advantages(b, stored_values(b), g, l);
    Index off = 0;
    for (const auto& tr : trs) {
      const Vector oracle = gae_double_sum(tr, g, l);
      CHECK((adv.advantages.segment(off, tr.size()) - oracle).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(adv.returns.segment(off, tr.size()) == discounted_returns(tr, g, tr.bootstrap_value));
      off += tr.size();
    }
    CHECK((adv.value_targets - (stored_values(b).values + adv.advantages)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::abs(adv.normalized.mean()) < 1e-6);
  }
}

TEST_CASE("GAE errors") {
  const RolloutBatch b = batch_of({make_trajectory({1, 2}, true)});
  BatchValues short_values = zero_values(b);
  short_values.values.conservativeResize(1);
  CHECK_THROWS_AS(gae_advantages(b, short_values, 0.9, 0.9), InvalidArgument);
  CHECK_THROWS_AS(gae_advantages(b, zero_values(b), 0.9, 1.5), InvalidArgument);
  CHECK_THROWS_AS(gae_advantages(b, zero_values(b), 0.0, 0.5), InvalidArgument);
}

TEST_CASE("normalize_advantages") {
  Vector x(3);
  x << 1, 2, 3;
  const auto n = normalize_advantages(x);
  CHECK(n.values(0) == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-7));
  CHECK(n.values(1) == doctest::Approx(0.0));
  CHECK(n.values(2) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-7));
  CHECK_FALSE(n.degenerate);

  const auto twice = normalize_advantages(n.values);
  CHECK((twice.values - n.values).cwiseAbs().maxCoeff() < 1e-6);

  const auto flat = normalize_advantages(Vector::Constant(5, 3.0));
  CHECK(flat.degenerate);
  CHECK(flat.values.isZero(0.0));

  Rng rng(2);
  const Vector r = gaussian_vector(50, rng);
  const auto base = normalize_advantages(r);
  CHECK(std::abs(base.values.mean()) < 1e-6);
  CHECK(std::abs(std::sqrt(base.values.squaredNorm() / 50.0) - 1.0) < 1e-6);
  const auto affine = normalize_advantages((3.5 * r.array() - 7.0).matrix());
  CHECK((affine.values - base.values).cwiseAbs().maxCoeff() < 1e-6);
  const auto flipped = normalize_advantages((-2.0 * r).eval());
  CHECK((flipped.values + base.values).cwiseAbs().maxCoeff() < 1e-6);

  CHECK_THROWS_AS(normalize_advantages(Vector::Ones(1)), InvalidArgument);
}

TEST_CASE("training batch flattening and subsets") {
  const EnvSpec spec = EnvSpec::make(EnvName::point_mass);
  const GaussianPolicy p = GaussianPolicy::make(4, 2, {8}, InitScheme::orthogonal, 0);
  const RolloutBatch b = collect_rollouts(spec, p, nullptr, 250, 1);
  const AdvantageSet adv = gae_advantages(b, 0.99, 0.95);
  const TrainingBatch tb = make_training_batch(b, adv);
  CHECK(tb.size() == 250);
  CHECK(tb.advantages == adv.normalized);
  CHECK(tb.states == b.states());
  const TrainingBatch sub = tb.subset({3, 1, 200});
  CHECK(sub.size() == 3);
  CHECK(sub.states.col(2) == tb.states.col(200));
  CHECK(sub.old_log_probs(1) == tb.old_log_probs(1));
}
