#include "support.hpp"

#include <dpg/numerics/adam.hpp>
#include <dpg/numerics/conjugate_gradient.hpp>
#include <dpg/numerics/init.hpp>
#include <dpg/numerics/stats.hpp>

#include <doctest.h>

#include <Eigen/Dense>

using namespace dpg;
using namespace dpg::testing;

namespace {

Eigen::Map<const Matrix> weight_block(const MlpSpec& spec, const ParamVector& params, std::size_t k) {
  const auto blk = spec.layout()[k];
  return {params.data() + blk.weight_offset, blk.rows, blk.cols};
}

double gram_error(const Matrix& w, double gain) {
  const Matrix gram = w.rows() <= w.cols() ? Matrix(w * w.transpose()) : Matrix(w.transpose() * w);
  const Matrix target = gain * gain * Matrix::Identity(gram.rows(), gram.cols());
  return (gram - target).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("orthogonal init: square layer with unit gain") {
  const MlpSpec spec = MlpSpec::make(4, {}, 4);
  const std::vector<double> gains{1.0};
  const ParamVector p = orthogonal_init(spec, gains, 3);
  CHECK(gram_error(weight_block(spec, p, 0), 1.0) < 1e-6);
}

TEST_CASE("orthogonal init: 64 inputs to 17 outputs with gain sqrt 2") {
  const MlpSpec spec = MlpSpec::make(64, {}, 17);
  const std::vector<double> gains{std::sqrt(2.0)};
  const ParamVector p = orthogonal_init(spec, gains, 11);
  const auto w = weight_block(spec, p, 0);
  REQUIRE(w.rows() == 17);
  CHECK((Matrix(w * w.transpose()) - 2.0 * Matrix::Identity(17, 17)).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("orthogonal init: every layer of a deep net, zero biases, determinism") {
  const MlpSpec spec = MlpSpec::make(17, {64, 64}, 6);
  const auto gains = standard_gains(spec, 0.01);
  REQUIRE(gains.size() == 3);
  CHECK(gains[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(gains[2] == 0.01);
  const ParamVector p = orthogonal_init(spec, gains, 5);
  for (std::size_t k = 0; k < 3; ++k) CHECK(gram_error(weight_block(spec, p, k), gains[k]) < 1e-6);
  for (const auto& blk : spec.layout()) CHECK(p.segment(blk.bias_offset, blk.rows).isZero(0.0));
  CHECK(orthogonal_init(spec, gains, 5) == p);
  CHECK(orthogonal_init(spec, gains, 6) != p);
}

TEST_CASE("orthogonal init rejects bad gains") {
  const MlpSpec spec = MlpSpec::make(3, {4}, 2);
  const std::vector<double> negative{1.0, -1.0};
  const std::vector<double> zero{0.0, 1.0};
  const std::vector<double> short_list{1.0};
  CHECK_THROWS_AS(orthogonal_init(spec, negative, 0), InvalidArgument);
  CHECK_THROWS_AS(orthogonal_init(spec, zero, 0), InvalidArgument);
  CHECK_THROWS_AS(orthogonal_init(spec, short_list, 0), InvalidArgument);
}

TEST_CASE("mlp spec validation and layout partition") {
  const MlpSpec spec = MlpSpec::make(3, {5, 4}, 2);
  CHECK(spec.param_count() == 3 * 5 + 5 + 5 * 4 + 4 + 4 * 2 + 2);
  std::vector<int> hits(static_cast<std::size_t>(spec.param_count()), 0);
  for (const auto& blk : spec.layout()) {
    for (Index i = 0; i < blk.rows * blk.cols; ++i) ++hits[static_cast<std::size_t>(blk.weight_offset + i)];
    for (Index i = 0; i < blk.rows; ++i) ++hits[static_cast<std::size_t>(blk.bias_offset + i)];
  }
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));

  MlpSpec bad = spec;
  bad.activations.back() = Activation::tanh;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  MlpSpec one{{3}, {}};
  CHECK_THROWS_AS(one.validate(), InvalidArgument);
}

TEST_CASE("mlp_eval_grad: linear layer gradient is the input in the selected row") {
  const MlpSpec spec = MlpSpec::make(3, {}, 2);
  Rng rng(1);
  const ParamVector p = gaussian_vector(spec.param_count(), rng);
  const Vector input = Vector::LinSpaced(3, 1.0, 3.0);
  const Vector e1 = Vector::Unit(2, 0);
  const auto r = mlp_eval_grad<double>(spec, p, input, e1);
  const auto blk = spec.layout()[0];
  Eigen::Map<const Matrix> gw(r.grad.data() + blk.weight_offset, blk.rows, blk.cols);
  CHECK(gw.row(0).transpose() == input);
  CHECK(gw.row(1).isZero(0.0));
  CHECK(r.grad(blk.bias_offset) == 1.0);
  CHECK(r.grad(blk.bias_offset + 1) == 0.0);
}

TEST_CASE("mlp_eval_grad: zero input and zero biases give zero output") {
  const MlpSpec spec = MlpSpec::make(4, {8, 8}, 3);
  ParamVector p = default_init(spec, 2);
  for (const auto& blk : spec.layout()) p.segment(blk.bias_offset, blk.rows).setZero();
  const auto r = mlp_eval_grad<double>(spec, p, Vector::Zero(4), Vector::Ones(3));
  CHECK(r.output.isZero(0.0));
}

TEST_CASE("mlp_eval_grad matches central differences on 100 random probes") {
  Rng rng(7);
  std::uniform_int_distribution<int> width(1, 16);
  double worst = 0.0;
  for (int probe = 0; probe < 100; ++probe) {
    const MlpSpec spec = MlpSpec::make(width(rng), {width(rng), width(rng)}, width(rng));
    const ParamVector p = gaussian_vector(spec.param_count(), rng, 0.5);
    const Vector x = gaussian_vector(spec.input_size(), rng);
    const Vector cot = gaussian_vector(spec.output_size(), rng);
    const auto r = mlp_eval_grad<double>(spec, p, x, cot);
    const Vector fd = finite_difference(
        [&](const Vector& q) { return mlp_eval_grad<double>(spec, q, x, cot).output.dot(cot); }, p);
    worst = std::max(worst, max_relative_error(r.grad, fd, 1e-4));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("mlp_eval_grad errors") {
  const MlpSpec spec = MlpSpec::make(2, {3}, 1);
  const ParamVector p = ParamVector::Zero(spec.param_count());
  CHECK_THROWS_AS(mlp_eval_grad<double>(spec, p, Vector::Zero(3), Vector::Zero(1)), InvalidArgument);
  CHECK_THROWS_AS(mlp_eval_grad<double>(spec, p, Vector::Zero(2), Vector::Zero(2)), InvalidArgument);
  Vector bad = Vector::Zero(2);
  bad(1) = std::nan("");
  CHECK_THROWS_AS(mlp_eval_grad<double>(spec, p, bad, Vector::Zero(1)), InvalidArgument);
  CHECK_THROWS_AS(mlp_eval_grad<double>(spec, ParamVector::Zero(3), Vector::Zero(2), Vector::Zero(1)),
                  InvalidArgument);
}

TEST_CASE("adam: zero gradient leaves params unchanged") {
  const AdamState s = AdamState::fresh(3, 1e-3);
  const ParamVector p = Vector::LinSpaced(3, -1.0, 1.0);
  const auto [next, state] = adam_step(s, p, ParamVector::Zero(3));
  CHECK(next == p);
  CHECK(state.step_count == 1);
}

TEST_CASE("adam: first step moves by the learning rate") {
  const AdamState s = AdamState::fresh(1, 1e-3);
  const ParamVector p = ParamVector::Constant(1, 0.5);
  const auto [next, state] = adam_step(s, p, ParamVector::Constant(1, 1.0));
  CHECK(std::abs((next(0) - p(0)) - (-1e-3)) < 1e-9);
  CHECK(state.first_moment(0) == doctest::Approx(0.1));
  CHECK(state.second_moment(0) == doctest::Approx(0.001));
}

TEST_CASE("adam: annealed to zero at the horizon") {
  AdamState s = AdamState::fresh(2, 1e-2, true, 10);
  CHECK(s.effective_lr() == 1e-2);
  s.step_count = 5;
  CHECK(s.effective_lr() == doctest::Approx(5e-3));
  s.step_count = 10;
  CHECK(s.effective_lr() == 0.0);
  const ParamVector p = Vector::Ones(2);
  const auto [next, state] = adam_step(s, p, Vector::Ones(2));
  CHECK(next == p);
  CHECK(state.step_count == 11);
  CHECK(state.effective_lr() == 0.0);
}

TEST_CASE("adam: non-finite gradient reports its index") {
  const AdamState s = AdamState::fresh(4, 1e-3);
  ParamVector g = ParamVector::Zero(4);
  g(2) = std::numeric_limits<double>::infinity();
  try {
    (void)adam_step(s, ParamVector::Zero(4), g);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.index() == 2);
  }
  CHECK_THROWS_AS(adam_step(s, ParamVector::Zero(3), ParamVector::Zero(4)), InvalidArgument);
}

TEST_CASE("conjugate gradient: identity system solves in one iteration") {
  Rng rng(2);
  const ParamVector b = gaussian_vector(7, rng);
  const ParamVector x = conjugate_gradient([](const ParamVector& v) { return v; }, b, 1, 0.0);
  CHECK((x - b).norm() < 1e-14);
}

TEST_CASE("conjugate gradient: 2x2 system matches the closed-form inverse") {
  Matrix a(2, 2);
  a << 4, 1, 1, 3;
  Vector b(2);
  b << 1, 2;
  const ParamVector x = conjugate_gradient([&](const ParamVector& v) { return ParamVector(a * v); }, b, 2, 0.0);
  Vector exact(2);
  exact << 1.0 / 11.0, 7.0 / 11.0;  // inverse is [[3,-1],[-1,4]] / 11
  CHECK((x - exact).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("conjugate gradient: damped defaults on a 20-dimensional SPD system") {
  // Rank-9 PSD operator, like a Fisher matrix estimated from few states: with
  // damping the system has at most 10 distinct eigenvalues.
  Rng rng(4);
  const Matrix g = gaussian_matrix(20, 9, rng);
  const Matrix a = g * g.transpose();
  const ParamVector b = gaussian_vector(20, rng);
  CgTrace trace;
  const ParamVector x =
      conjugate_gradient([&](const ParamVector& v) { return ParamVector(a * v); }, b, 10, 0.1, &trace);
  const Matrix m = a + 0.1 * Matrix::Identity(20, 20);
  CHECK((m * x - b).norm() < 1e-6);
  for (std::size_t k = 1; k < trace.energies.size(); ++k) CHECK(trace.energies[k] <= trace.energies[k - 1] + 1e-12);
}

TEST_CASE("conjugate gradient: dim iterations reach relative residual 1e-8") {
  Rng rng(9);
  for (Index dim : {5, 17, 33, 50}) {
    const Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(dim, dim, rng));
    const Matrix q = qr.householderQ();
    const Vector eig = Vector::LinSpaced(dim, 1.0, 10.0);
    const Matrix a = q * eig.asDiagonal() * q.transpose();
    const ParamVector b = gaussian_vector(dim, rng);
    const ParamVector x = conjugate_gradient([&](const ParamVector& v) { return ParamVector(a * v); }, b,
                                             static_cast<int>(dim), 0.0);
    CHECK((a * x - b).norm() / b.norm() < 1e-8);
  }
}

TEST_CASE("conjugate gradient: zero right-hand side and NaN operator") {
  const ParamVector x = conjugate_gradient([](const ParamVector& v) { return v; }, ParamVector::Zero(4), 3, 0.1);
  CHECK(x.isZero(0.0));
  auto nan_op = [](const ParamVector& v) { return ParamVector(v * std::nan("")); };
  CHECK_THROWS_AS(conjugate_gradient(nan_op, ParamVector::Ones(3), 3, 0.0), NumericalError);
  CHECK_THROWS_AS(conjugate_gradient(nan_op, ParamVector::Ones(3), 0, 0.0), InvalidArgument);
}

TEST_CASE("pairwise cosine: identical and antiparallel vectors") {
  const ParamVector v = Vector::LinSpaced(5, 1.0, 5.0);
  const std::vector<ParamVector> same{v, v};
  const auto s = pairwise_cosine_stats(same, 1000, 1);
  CHECK(s.mean == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.ci_low == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.ci_high == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<ParamVector> opposite{v, ParamVector(-v)};
  CHECK(pairwise_cosine_stats(opposite, 1000, 1).mean == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("pairwise cosine: random high-dimensional directions are nearly orthogonal") {
  Rng rng(12);
  std::vector<ParamVector> vs;
  for (int i = 0; i < 10; ++i) vs.push_back(gaussian_vector(10000, rng));
  const auto s = pairwise_cosine_stats(vs, 1000, 3);
  CHECK(std::abs(s.mean) < 0.03);
  CHECK(s.pair_count == 45);
  CHECK(s.ci_low <= s.mean);
  CHECK(s.mean <= s.ci_high);
  CHECK(s.ci_low >= -1.0);
  CHECK(s.ci_high <= 1.0);
}

TEST_CASE("pairwise cosine: permutation invariance and errors") {
  Rng rng(13);
  std::vector<ParamVector> vs;
  for (int i = 0; i < 6; ++i) vs.push_back(gaussian_vector(8, rng) + Vector::Ones(8));
  std::vector<ParamVector> shuffled = vs;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[1], shuffled[4]);
  const auto a = pairwise_cosine_stats(vs, 500, 2);
  const auto b = pairwise_cosine_stats(shuffled, 500, 2);
  CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
  CHECK(a.ci_low == doctest::Approx(b.ci_low).epsilon(1e-12));
  CHECK(a.ci_high == doctest::Approx(b.ci_high).epsilon(1e-12));

  vs[3].setZero();
  try {
    (void)pairwise_cosine_stats(vs, 10, 0);
    FAIL("expected ZeroNormError");
  } catch (const ZeroNormError& e) {
    CHECK(e.index() == 3);
  }
  const std::vector<ParamVector> single{Vector::Ones(3)};
  CHECK_THROWS_AS(pairwise_cosine_stats(single, 10, 0), InvalidArgument);
  const std::vector<ParamVector> ragged{Vector::Ones(3), Vector::Ones(4)};
  CHECK_THROWS_AS(pairwise_cosine_stats(ragged, 10, 0), InvalidArgument);
}

TEST_CASE("running stats: single sample, small sequence, constant stream") {
  const RunningStats one = running_stats_update({}, 5.0);
  CHECK(one.count == 1);
  CHECK(one.mean == 5.0);
  CHECK(one.variance() == 0.0);

  RunningStats s;
  for (double x : {1.0, 2.0, 3.0}) s = running_stats_update(s, x);
  CHECK(std::abs(s.mean - 2.0) < 1e-12);
  CHECK(std::abs(s.variance() - 2.0 / 3.0) < 1e-12);

  RunningStats c;
  for (int i = 0; i < 1000000; ++i) c.add(123.456);
  CHECK(c.variance() < 1e-9);
  CHECK_THROWS_AS(running_stats_update({}, std::nan("")), InvalidArgument);
}

TEST_CASE("running stats: streaming and merging match batch formulas") {
  Rng rng(21);
  const Vector xs = gaussian_vector(10000, rng, 3.0).array() + 7.0;
  RunningStats all;
  RunningStats left;
  RunningStats right;
  for (Index i = 0; i < xs.size(); ++i) {
    all.add(xs(i));
    (i < 3700 ? left : right).add(xs(i));
  }
  const double mean = xs.mean();
  const double var = (xs.array() - mean).square().mean();
  CHECK(std::abs(all.mean - mean) / std::abs(mean) < 1e-9);
  CHECK(std::abs(all.variance() - var) / var < 1e-9);
  const RunningStats merged = merge(left, right);
  CHECK(merged.count == all.count);
  CHECK(std::abs(merged.mean - mean) / std::abs(mean) < 1e-9);
  CHECK(std::abs(merged.variance() - var) / var < 1e-9);
  CHECK(merge(RunningStats{}, all) == all);
}

TEST_CASE("bootstrap mean interval contains the mean and is reproducible") {
  Rng rng(5);
  const Vector xs = gaussian_vector(200, rng);
  const std::vector<double> samples(xs.data(), xs.data() + xs.size());
  const auto a = bootstrap_mean(samples, 1000, 9);
  const auto b = bootstrap_mean(samples, 1000, 9);
  CHECK(a.mean == doctest::Approx(xs.mean()));
  CHECK(a.ci_low <= a.mean);
  CHECK(a.mean <= a.ci_high);
  CHECK(a.ci_low == b.ci_low);
  CHECK(a.ci_high == b.ci_high);
}
