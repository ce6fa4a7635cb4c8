#include <dpg/numerics/init.hpp>

#include <Eigen/QR>

#include <cmath>

namespace dpg {

namespace {

// Orthonormal columns (tall) or rows (wide) via QR of a Gaussian matrix with
// the sign of R's diagonal folded into Q.
Matrix orthogonal_block(Index rows, Index cols, Rng& rng) {
  const Index tall = std::max(rows, cols);
  const Index thin = std::min(rows, cols);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(tall, thin);
  for (Index j = 0; j < thin; ++j)
    for (Index i = 0; i < tall; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(tall, thin);
  const Matrix& r = qr.matrixQR();
  for (Index j = 0; j < thin; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  if (rows >= cols) return q;
  return q.transpose();
}

}  // namespace

ParamVector orthogonal_init(const MlpSpec& spec, std::span<const double> gains,
                            std::uint64_t seed) {
  spec.validate();
  if (static_cast<Index>(gains.size()) != spec.layer_count()) {
    throw InvalidArgument("orthogonal_init: need one gain per weight layer");
  }
  for (double g : gains) {
    if (!(g > 0.0) || !std::isfinite(g)) throw InvalidArgument("orthogonal_init: gains must be positive");
  }
  ParamVector params = ParamVector::Zero(spec.param_count());
  Rng rng(seed);
  const auto blocks = spec.layout();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& blk = blocks[k];
    Eigen::Map<Matrix> w(params.data() + blk.weight_offset, blk.rows, blk.cols);
    w = gains[k] * orthogonal_block(blk.rows, blk.cols, rng);
  }
  return params;
}

std::vector<double> standard_gains(const MlpSpec& spec, double output_gain) {
  std::vector<double> gains(static_cast<std::size_t>(spec.layer_count()), std::sqrt(2.0));
  gains.back() = output_gain;
  return gains;
}

ParamVector default_init(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  ParamVector params(spec.param_count());
  Rng rng(seed);
  for (const auto& blk : spec.layout()) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(blk.cols));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    for (Index i = blk.weight_offset; i < blk.bias_offset + blk.rows; ++i) params(i) = uniform(rng);
  }
  return params;
}

}  // namespace dpg
