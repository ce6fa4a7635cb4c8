// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include "support.hpp"

#include <dpg/diagnostics/gradients.hpp>
#include <dpg/diagnostics/trust_region.hpp>
#include <dpg/diagnostics/value.hpp>
#include <dpg/harness/ablation.hpp>
#include <dpg/harness/io.hpp>
#include <dpg/harness/reports.hpp>
#include <dpg/harness/run.hpp>
#include <dpg/numerics/stats.hpp>

#include <Eigen/Dense>

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>

using namespace dpg;
using namespace dpg::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool near_kink(const GaussianPolicy& p, const TrainingBatch& b, double eps, double margin) {
  const Vector rho = (log_probs(p, b.states, b.actions) - b.old_log_probs).array().exp();
  return ((rho.array() - (1.0 + eps)).abs() < margin).any() || ((rho.array() - (1.0 - eps)).abs() < margin).any();
}

bool value_near_kink(const ValueFunction& vf, const TrainingBatch& b, double eps, double margin) {
  const Vector v = values(vf, b.states);
  for (Index i = 0; i < v.size(); ++i) {
    const double d = std::abs(v(i) - b.old_values(i));
    if (std::abs(d - eps) < margin) return true;
    const double clipped = std::clamp(v(i), b.old_values(i) - eps, b.old_values(i) + eps);
    if (std::abs(std::abs(clipped - b.value_targets(i)) - std::abs(v(i) - b.value_targets(i))) < margin &&
        d > eps) {
      return true;
    }
  }
  return false;
}

Outcome gradient_correctness() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  int problems = 0;
  int skipped = 0;
  for (std::uint64_t seed = 0; problems < 100; ++seed) {
    const auto prob = tiny_problem(1000 + seed, 3, 2, 10, 0.08);
    const ValueFunction vf = ValueFunction::make(3, {5, 4}, InitScheme::default_uniform, seed);
    if (near_kink(prob.policy, prob.batch, 0.2, 1e-3) || value_near_kink(vf, prob.batch, 0.2, 1e-3)) {
      ++skipped;
      continue;
    }
    ++problems;
    for (bool clipped : {false, true}) {
      const Vector g = surrogate_and_grad(prob.policy, prob.batch, clipped, 0.2).grad;
      const Vector fd = finite_difference(
          [&](const Vector& q) {
            GaussianPolicy p = prob.policy;
            p.params = q;
            return surrogate_and_grad(p, prob.batch, clipped, 0.2).value;
          },
          prob.policy.params);
      worst = std::max(worst, max_relative_error(g, fd, 1e-4));

      const Vector vg = value_loss_and_grad(vf, prob.batch.states, prob.batch.old_values, prob.batch.value_targets,
                                            clipped, 0.2)
                            .grad;
      const Vector vfd = finite_difference(
          [&](const Vector& q) {
            ValueFunction w = vf;
            w.params = q;
            return value_loss_and_grad(w, prob.batch.states, prob.batch.old_values, prob.batch.value_targets, clipped,
                                       0.2)
                .value;
          },
          vf.params);
      worst = std::max(worst, max_relative_error(vg, vfd, 1e-4));
    }
  }
  const double t = seconds_since(start);
  return {worst < 1e-4 && t < 60.0,
          fmt("100 problems (%d resampled near a kink), max relative error %.3g, %.2f s", skipped, worst, t)};
}

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

Outcome gae_oracle() {
  Rng rng(2024);
  std::uniform_int_distribution<int> len(1, 20);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  bool exact = true;
  for (int trial = 0; trial < 500; ++trial) {
    Trajectory tr;
    const int n = len(rng);
    for (int t = 0; t < n; ++t) {
      Transition tn;
      tn.state = Vector::Constant(1, t);
      tn.action = Vector::Zero(1);
      tn.next_state = tn.state;
      tn.reward = tn.scaled_reward = normal(rng);
      tn.value_pred = normal(rng);
      tr.transitions.push_back(tn);
    }
    const bool terminal = unit(rng) < 0.5;
    tr.transitions.back().done = terminal;
    tr.complete = terminal;
    tr.truncated = !terminal;
    tr.bootstrap_value = terminal ? 0.0 : normal(rng);
    RolloutBatch b;
    b.pair_count = n;
    b.trajectories = {tr};
    const double gamma = 0.5 + 0.499 * unit(rng);
    const double lambda = unit(rng);
    const Vector adv = gae_advantages(b, stored_values(b), gamma, lambda).advantages;
    worst = std::max(worst, (adv - gae_double_sum(tr, gamma, lambda)).cwiseAbs().maxCoeff());

    const Vector td = gae_advantages(b, stored_values(b), gamma, 0.0).advantages;
    for (Index t = 0; t < n; ++t) {
      const double next = t + 1 < n ? tr.transitions[static_cast<std::size_t>(t + 1)].value_pred
                                    : (tr.truncated ? tr.bootstrap_value : 0.0);
      const auto& tn = tr.transitions[static_cast<std::size_t>(t)];
      exact = exact && td(t) == tn.scaled_reward + gamma * next - tn.value_pred;
    }
    RolloutBatch zero = b;
    zero.trajectories[0].bootstrap_value = 0.0;
    const Vector mc = gae_advantages(zero, zero_values(zero), gamma, 1.0).advantages;
    exact = exact && mc == discounted_returns(zero.trajectories[0], gamma, 0.0);
  }
  return {worst <= 1e-10 && exact,
          fmt("500 trajectories, max |recursive - double sum| %.3g; lambda 0/1 identities %s", worst,
              exact ? "exact" : "NOT exact")};
}

Outcome trpo_trust_region() {
  const auto start = std::chrono::steady_clock::now();
  const AgentConfig cfg = AgentConfig::defaults(Algorithm::trpo, EnvName::pendulum);
  Agent agent = make_agent(cfg, 7);
  int accepted = 0;
  int within = 0;
  int iterations = 0;
  double worst_kl = 0.0;
  const double bound = cfg.trpo.kl_delta + 1e-6;
  while (accepted < 200 && iterations < 600) {
    Iteration step = run_iteration(agent, cfg, iterations, derive_seed(7, iterations));
    if (!step.report.step_rejected) {
      ++accepted;
      worst_kl = std::max(worst_kl, step.report.mean_kl);
      if (step.report.mean_kl <= bound) ++within;
    }
    agent = std::move(step.agent);
    ++iterations;
  }

  GaussianPolicy p = GaussianPolicy::make(1, 1, {}, InitScheme::default_uniform, 1);
  p.params << 0.7, -0.3, std::log(0.8);
  Rng rng(2);
  TrainingBatch b;
  const Index n = 200;
  b.states = gaussian_matrix(1, n, rng);
  b.actions = policy_means(p, b.states) + gaussian_matrix(1, n, rng, 0.8);
  b.old_log_probs = log_probs(p, b.states, b.actions);
  b.advantages = normalize_advantages(gaussian_vector(n, rng)).values;
  b.old_values = b.value_targets = b.returns = Vector::Zero(n);
  TrpoConfig toy;
  toy.cg_damping = 0.0;
  toy.fisher_fraction = 1.0;
  const NaturalStep step = trpo_direction(p, b, toy, 0);
  Matrix fisher = Matrix::Zero(3, 3);
  for (Index i = 0; i < n; ++i) {
    const Eigen::Vector2d x(b.states(0, i), 1.0);
    fisher.topLeftCorner(2, 2) += x * x.transpose() / (0.64 * static_cast<double>(n));
  }
  fisher(2, 2) = 2.0;
  const Vector natural = fisher.ldlt().solve(step.gradient);
  const double cosine = cosine_similarity(step.direction, natural);

  return {accepted == 200 && within == accepted && cosine >= 1.0 - 1e-4,
          fmt("%d accepted steps in %d iterations, %d/%d with mean KL <= %.6g (max %.6g); natural-gradient "
              "cosine %.10f; %.0f s",
              accepted, iterations, within, accepted, bound, worst_kl, cosine, seconds_since(start))};
}

Outcome first_step_identity() {
  int identical = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto prob = tiny_problem(500 + seed, 4, 2, 64);
    const Objective clipped = surrogate_and_grad(prob.old_policy, prob.batch, true, 0.2);
    const Objective plain = surrogate_and_grad(prob.old_policy, prob.batch, false, 0.2);
    if (clipped.grad == plain.grad) ++identical;
  }
  return {identical == 50, fmt("%d/50 batches bit-identical", identical)};
}

Outcome optima_probe() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (double adv : {1.0, -1.0}) {
    const OptimaProbeReport r = ppo_optima_probe(0.2, adv, optima_probe_grid(0.2));
    int plateau = 0;
    bool flat = true;
    bool constant = true;
    double value = std::nan("");
    for (const auto& pt : r.points) {
      const bool beyond = adv > 0 ? pt.ratio >= 1.2 : pt.ratio <= 0.8;
      if (!beyond) continue;
      ++plateau;
      flat = flat && pt.derivative == 0.0;
      if (std::isnan(value)) value = pt.objective;
      constant = constant && pt.objective == value;
    }
    ok = ok && plateau > 0 && flat && constant && r.theorem_holds;
    detail += fmt("A=%+g: %d plateau points, derivative %s, objective %s; ", adv, plateau, flat ? "0" : "NONZERO",
                  constant ? "constant" : "VARIES");
  }
  const double t = seconds_since(start);
  return {ok && t < 1.0, detail + fmt("%.4f s", t)};
}

Outcome reward_scaling() {
  Rng rng(11);
  std::normal_distribution<double> normal(0.3, 2.0);
  std::geometric_distribution<int> episode(0.01);
  const double gamma = 0.99;
  const int n = 10000;
  std::vector<double> raw(n);
  std::vector<bool> starts(n, false);
  for (int t = 0; t < n; ++t) raw[static_cast<std::size_t>(t)] = normal(rng);
  for (int t = 0; t < n; t += 1 + episode(rng)) starts[static_cast<std::size_t>(t)] = true;

  RewardScaler scaler;
  std::vector<double> streamed(n);
  for (int t = 0; t < n; ++t) {
    if (starts[static_cast<std::size_t>(t)]) scaler.start_episode();
    const ScaledReward out = reward_scale_update(scaler, raw[static_cast<std::size_t>(t)], gamma);
    streamed[static_cast<std::size_t>(t)] = out.reward;
    scaler = out.state;
  }

  std::vector<double> returns(n);
  double running = 0.0;
  double worst = 0.0;
  for (int t = 0; t < n; ++t) {
    if (starts[static_cast<std::size_t>(t)]) running = 0.0;
    running = gamma * running + raw[static_cast<std::size_t>(t)];
    returns[static_cast<std::size_t>(t)] = running;
    const int count = t + 1;
    double mean = 0.0;
    for (int k = 0; k < count; ++k) mean += returns[static_cast<std::size_t>(k)];
    mean /= count;
    double var = 0.0;
    for (int k = 0; k < count; ++k) {
      const double d = returns[static_cast<std::size_t>(k)] - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / count);
    const double expected = count < 2 || sd == 0.0 ? raw[static_cast<std::size_t>(t)]
                                                   : raw[static_cast<std::size_t>(t)] / sd;
    worst = std::max(worst, std::abs(expected - streamed[static_cast<std::size_t>(t)]));
  }
  return {worst <= 1e-9, fmt("%d steps, max |streamed - batch oracle| %.3g", n, worst)};
}

Checkpoint train_checkpoint(Algorithm algo, EnvName env, int iterations, std::uint64_t seed) {
  ExperimentConfig cfg = ExperimentConfig::defaults(algo, env);
  cfg.agent.total_iterations = iterations;
  const RunRecord rec = run_training(cfg, seed, RunOptions{false, false});
  if (rec.status != RunStatus::completed) throw std::runtime_error("training failed: " + rec.failure);
  return {cfg.agent, rec.config_hash, seed, iterations, rec.final_agent};
}

Outcome gradient_budget_trend() {
  const auto start = std::chrono::steady_clock::now();
  int ordered = 0;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Checkpoint cp = train_checkpoint(Algorithm::ppo, EnvName::cartpole_continuous, 5, seed);
    GradientQualityOptions opt;
    opt.budgets = {2000, 100000};
    opt.repeats = 10;
    opt.reference_budget = 100000;
    const GradientQualityReport r = gradient_quality_scan(cp.agent, cp.config, cp.iteration, opt, derive_seed(seed, 7));
    const double small = r.rows.at(0).pairwise.mean;
    const double large = r.rows.at(1).pairwise.mean;
    if (small < large) ++ordered;
    detail += fmt("[%.3f < %.3f] ", small, large);
  }
  const double t = seconds_since(start);
  return {ordered >= 4 && t < 1800.0,
          fmt("cosine at 2K vs 100K lower in %d/5 seeds ", ordered) + detail + fmt("%.0f s", t)};
}

double two_state_variance_oracle(const TwoStateMdp& m, const std::array<double, 2>& b) {
  double second_moment = 0.0;
  double mean_sq = 0.0;
  for (int s = 0; s < 2; ++s) {
    const double d = m.state_value(s) - b[static_cast<std::size_t>(s)];
    const double var = m.sigma[static_cast<std::size_t>(s)] * m.sigma[static_cast<std::size_t>(s)];
    const double k = m.k[static_cast<std::size_t>(s)];
    second_moment += m.prob[static_cast<std::size_t>(s)] * (3.0 * k * k * var + d * d) / var;
    mean_sq += m.prob[static_cast<std::size_t>(s)] * m.prob[static_cast<std::size_t>(s)] * k * k;
  }
  return second_moment - mean_sq;
}

Outcome baseline_ordering() {
  const auto start = std::chrono::steady_clock::now();
  int ordered = 0;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Checkpoint cp = train_checkpoint(Algorithm::ppo, EnvName::cartpole_continuous, 5, seed);
    const ValueFunction truth = fit_true_value(cp.agent, cp.config, TrueValueOptions{}, derive_seed(seed, 8));
    const BaselineVarianceReport r =
        baseline_variance_comparison(cp.agent, cp.config, truth, {2000}, 10, cp.iteration, derive_seed(seed, 9));
    std::map<Baseline, double> cos;
    for (const auto& row : r.rows) cos[row.baseline] = row.pairwise.mean;
    const double tv = cos.at(Baseline::true_value);
    const double av = cos.at(Baseline::agent_value);
    const double zv = cos.at(Baseline::zero);
    if (tv >= av && av >= zv) ++ordered;
    detail += fmt("[%.3f %.3f %.3f] ", tv, av, zv);
  }

  TwoStateMdp mdp;
  mdp.prob = {0.3, 0.7};
  mdp.mu = {0.5, -1.0};
  mdp.sigma = {0.8, 1.5};
  mdp.k = {2.0, -0.5};
  mdp.c = {3.0, 1.0};
  const std::array<double, 2> true_b{mdp.state_value(0), mdp.state_value(1)};
  const double with_truth = analytic_gradient_variance(mdp, true_b);
  const double with_zero = analytic_gradient_variance(mdp, {0.0, 0.0});
  const bool matches = std::abs(with_truth - two_state_variance_oracle(mdp, true_b)) <= 1e-12 * with_zero &&
                       std::abs(with_zero - two_state_variance_oracle(mdp, {0.0, 0.0})) <= 1e-12 * with_zero;
  const bool reduces = with_truth < with_zero;
  return {ordered >= 4 && matches && reduces,
          fmt("true >= agent >= zero at 2K in %d/5 seeds ", ordered) + detail +
              fmt("; two-state variance %.6g (true) vs %.6g (zero), closed form %s; %.0f s", with_truth, with_zero,
                  matches ? "matches" : "MISMATCH", seconds_since(start))};
}

Outcome value_mre_split() {
  const Checkpoint cp = train_checkpoint(Algorithm::ppo, EnvName::pendulum, 100, 0);
  const RolloutBatch heldout = sample_batch(cp.agent, cp.config, cp.config.pairs_per_iter(), derive_seed(0, 31));
  const ValueQualityReport r =
      value_quality(cp.agent.value, heldout, cp.config.gamma(), cp.config.lambda(), Split::heldout, cp.iteration);
  return {r.gae_loss_mre < 0.2 && r.returns_mre > 2.0 * r.gae_loss_mre,
          fmt("heldout gae_loss_mre %.4f, returns_mre %.4f (ratio %.2f) at iteration %d", r.gae_loss_mre,
              r.returns_mre, r.returns_mre / r.gae_loss_mre, cp.iteration)};
}

Outcome trust_region_metrics_check() {
  ExperimentConfig ppo = ExperimentConfig::defaults(Algorithm::ppo, EnvName::pendulum);
  ppo.agent.total_iterations = 100;
  const RunRecord pr = run_training(ppo, 0, RunOptions{false, true});
  int measured = 0;
  int violating = 0;
  for (const auto& rep : pr.reports) {
    if (rep.iteration <= 25) continue;
    ++measured;
    if (rep.max_ratio > 1.0 + ppo.agent.ppo.clip_eps) ++violating;
  }

  ExperimentConfig trpo = ExperimentConfig::defaults(Algorithm::trpo, EnvName::pendulum);
  trpo.agent.total_iterations = 100;
  const RunRecord tr = run_training(trpo, 0, RunOptions{false, true});
  int accepted = 0;
  int within = 0;
  double worst = 0.0;
  for (const auto& rep : tr.reports) {
    if (rep.step_rejected) continue;
    ++accepted;
    worst = std::max(worst, rep.mean_kl);
    if (rep.mean_kl <= trpo.agent.trpo.kl_delta + 1e-6) ++within;
  }
  const bool pass = pr.status == RunStatus::completed && tr.status == RunStatus::completed &&
                    2 * violating >= measured && measured > 0 && within == accepted && accepted > 0;
  return {pass, fmt("PPO max_ratio > 1.2 in %d/%d iterations after 25; TRPO mean KL <= delta in %d/%d accepted "
                    "steps (max %.5f)",
                    violating, measured, within, accepted, worst)};
}

Outcome ablation_grid() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentConfig cfg = ExperimentConfig::defaults(Algorithm::ppo, EnvName::point_mass);
  cfg.agent.total_iterations = 15;
  cfg.agent.ppo.pairs_per_iter = 1000;
  cfg.final_reward_window = 5;
  cfg.lr_grid = {1e-4, 3e-4};
  cfg.seeds = {0, 1, 2};
  cfg.output_dir = scratch_dir("acceptance_ablation");
  const AblationSummary s = run_ablation(cfg, 0, true);

  std::vector<int> appearances(s.selected.size(), 0);
  for (const auto& p : s.partitions) {
    for (int k : p.agents) ++appearances[static_cast<std::size_t>(k)];
  }
  const bool counting = std::all_of(appearances.begin(), appearances.end(),
                                    [](int n) { return n == OptimizationToggles::kAblationAxes; });
  bool recomputed = true;
  for (const auto& run : s.runs) {
    const auto rewards = mean_rewards_from_csv(read_file(run.steps_csv));
    double tail = 0.0;
    for (std::size_t i = rewards.size() - 5; i < rewards.size(); ++i) tail += rewards[i];
    recomputed = recomputed && std::abs(tail / 5.0 - run.final_reward) <= 1e-12;
  }
  double biggest = 0.0;
  int axis = -1;
  for (int a = 0; a < OptimizationToggles::kAblationAxes; ++a) {
    const double e = s.axis_effect[static_cast<std::size_t>(a)];
    if (std::abs(e) > std::abs(biggest)) {
      biggest = e;
      axis = a;
    }
  }
  bool histogram = false;
  for (const auto& path : emit_outputs({make_output(s)}, s.output_dir)) {
    histogram = histogram || (path.find("histograms") != std::string::npos && path.ends_with(".svg"));
  }
  const double t = seconds_since(start);
  const bool pass = s.runs.size() == 96 && s.selected.size() == 48 && s.warnings.empty() && counting &&
                    recomputed && histogram && axis >= 0 && std::abs(biggest) > 0.0 && t < 7200.0;
  return {pass, fmt("%zu runs, %zu selected agents, counting invariant %s, CSV recomputation %s, histogram %s, "
                    "largest axis effect %s %+.4g; %.0f s",
                    s.runs.size(), s.selected.size(), counting ? "holds" : "BROKEN", recomputed ? "exact" : "MISMATCH",
                    histogram ? "written" : "MISSING", axis >= 0 ? OptimizationToggles::kAxisNames[static_cast<std::size_t>(axis)] : "none",
                    biggest, t)};
}

Outcome determinism() {
  int identical = 0;
  int total = 0;
  std::string detail;
  const std::vector<std::pair<Algorithm, EnvName>> cases{{Algorithm::ppo, EnvName::pendulum},
                                                         {Algorithm::ppo_m, EnvName::point_mass},
                                                         {Algorithm::trpo, EnvName::cartpole_continuous}};
  for (const auto& [algo, env] : cases) {
    ExperimentConfig cfg = ExperimentConfig::defaults(algo, env);
    cfg.agent.total_iterations = 12;
    cfg.diagnostics_cadence = 5;
    cfg.output_dir = scratch_dir("acceptance_replay_src");
    const RunRecord rec = run_training(cfg, 3);
    const ReplayResult r = replay_run(rec.run_dir, scratch_dir("acceptance_replay_dst"));
    ++total;
    if (r.identical && !r.compared.empty()) ++identical;
    detail += fmt("%s/%s: %zu files %s; ", to_string(algo).c_str(), to_string(env).c_str(), r.compared.size(),
                  r.identical ? "identical" : ("DIFFER: " + r.difference).c_str());
  }
  return {identical == total, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"gradient correctness", gradient_correctness},
      {"GAE oracle equivalence", gae_oracle},
      {"TRPO trust region", trpo_trust_region},
      {"PPO first-step identity", first_step_identity},
      {"optima probe", optima_probe},
      {"reward scaling", reward_scaling},
      {"gradient quality vs budget", gradient_budget_trend},
      {"baseline ordering", baseline_ordering},
      {"value MRE split", value_mre_split},
      {"trust-region metrics", trust_region_metrics_check},
      {"ablation harness", ablation_grid},
      {"determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::stoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto& [name, run] = criteria[static_cast<std::size_t>(id - 1)];
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::printf("criterion %2d %-28s %s  %s\n", id, name.c_str(), out.pass ? "PASS" : "FAIL", out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
