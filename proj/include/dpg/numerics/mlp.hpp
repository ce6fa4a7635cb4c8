#pragma once

#include <dpg/core.hpp>

#include <cmath>
#include <type_traits>
#include <vector>

namespace dpg {

enum class Activation { tanh, identity };

// Position of one dense layer inside a flat parameter vector. Weights are
// stored column-major as a (rows = fan_out) x (cols = fan_in) block followed
// by the bias.
struct LayerBlock {
  Index weight_offset = 0;
  Index bias_offset = 0;
  Index rows = 0;
  Index cols = 0;
};

struct MlpSpec {
  std::vector<Index> widths;
  std::vector<Activation> activations;  // one per weight layer

  // tanh between layers, identity on the output.
  static MlpSpec make(Index input, const std::vector<Index>& hidden, Index output);

  Index input_size() const { return widths.front(); }
  Index output_size() const { return widths.back(); }
  Index layer_count() const { return static_cast<Index>(widths.size()) - 1; }
  Index param_count() const;
  std::vector<LayerBlock> layout() const;

  // Throws InvalidArgument unless widths/activations describe a valid net.
  void validate() const;

  friend bool operator==(const MlpSpec&, const MlpSpec&) = default;
};

template <typename Scalar>
struct MlpTape {
  // activations[0] is the input batch, activations[k] the output of layer k.
  std::vector<MatrixX<Scalar>> activations;
};

namespace detail {

template <typename Scalar>
Scalar tanh_scalar(const Scalar& x) {
  using std::tanh;
  return Scalar(tanh(x));
}

template <typename Scalar>
void check_params(const MlpSpec& spec, Index size) {
  if (size != spec.param_count()) {
    throw InvalidArgument("mlp: parameter vector has " + std::to_string(size) +
                          " entries, spec needs " + std::to_string(spec.param_count()));
  }
}

}  // namespace detail

// Batched forward pass; columns of `inputs` are samples.
template <typename Scalar>
MatrixX<Scalar> mlp_forward(const MlpSpec& spec,
                            const Eigen::Ref<const VectorX<Scalar>>& params,
                            const MatrixX<Scalar>& inputs,
                            MlpTape<Scalar>* tape = nullptr) {
  detail::check_params<Scalar>(spec, params.size());
  if (inputs.rows() != spec.input_size()) {
    throw InvalidArgument("mlp: input has " + std::to_string(inputs.rows()) +
                          " rows, expected " + std::to_string(spec.input_size()));
  }
  if (tape) {
    tape->activations.clear();
    tape->activations.reserve(spec.widths.size());
    tape->activations.push_back(inputs);
  }
  MatrixX<Scalar> a = inputs;
  const auto blocks = spec.layout();
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& blk = blocks[k];
    Eigen::Map<const MatrixX<Scalar>> w(params.data() + blk.weight_offset, blk.rows, blk.cols);
    Eigen::Map<const VectorX<Scalar>> b(params.data() + blk.bias_offset, blk.rows);
    MatrixX<Scalar> z = w * a;
    z.colwise() += b;
    if (spec.activations[k] == Activation::tanh) {
      z = z.unaryExpr([](const Scalar& v) { return detail::tanh_scalar(v); });
    }
    a = std::move(z);
    if (tape) tape->activations.push_back(a);
  }
  return a;
}

// Reverse pass through a recorded forward pass. Returns the gradient of
// sum_j <output_j, cotangent_j> with respect to the parameters.
template <typename Scalar>
VectorX<Scalar> mlp_backward(const MlpSpec& spec,
                             const Eigen::Ref<const VectorX<Scalar>>& params,
                             const MlpTape<Scalar>& tape,
                             const MatrixX<Scalar>& output_cotangent) {
  detail::check_params<Scalar>(spec, params.size());
  const auto& acts = tape.activations;
  if (static_cast<Index>(acts.size()) != spec.layer_count() + 1) {
    throw InvalidArgument("mlp: tape does not match spec");
  }
  if (output_cotangent.rows() != spec.output_size() ||
      output_cotangent.cols() != acts.back().cols()) {
    throw InvalidArgument("mlp: cotangent shape mismatch");
  }
  VectorX<Scalar> grad = VectorX<Scalar>::Zero(params.size());
  const auto blocks = spec.layout();
  MatrixX<Scalar> delta = output_cotangent;
  for (Index k = spec.layer_count() - 1; k >= 0; --k) {
    const auto& blk = blocks[static_cast<std::size_t>(k)];
    const auto& out = acts[static_cast<std::size_t>(k) + 1];
    const auto& in = acts[static_cast<std::size_t>(k)];
    if (spec.activations[static_cast<std::size_t>(k)] == Activation::tanh) {
      delta = delta.cwiseProduct(
          out.unaryExpr([](const Scalar& v) { return Scalar(Scalar(1) - v * v); }));
    }
    Eigen::Map<MatrixX<Scalar>> gw(grad.data() + blk.weight_offset, blk.rows, blk.cols);
    Eigen::Map<VectorX<Scalar>> gb(grad.data() + blk.bias_offset, blk.rows);
    gw.noalias() = delta * in.transpose();
    gb = delta.rowwise().sum();
    if (k > 0) {
      Eigen::Map<const MatrixX<Scalar>> w(params.data() + blk.weight_offset, blk.rows, blk.cols);
      delta = (w.transpose() * delta).eval();
    }
  }
  return grad;
}

template <typename Scalar>
struct MlpEvalGrad {
  VectorX<Scalar> output;
  VectorX<Scalar> grad;
};

// Single-sample forward pass plus the exact gradient of <output, cotangent>.
template <typename Scalar>
MlpEvalGrad<Scalar> mlp_eval_grad(const MlpSpec& spec,
                                  const Eigen::Ref<const VectorX<Scalar>>& params,
                                  const VectorX<Scalar>& input,
                                  const VectorX<Scalar>& output_cotangent) {
  spec.validate();
  if (input.size() != spec.input_size()) {
    throw InvalidArgument("mlp_eval_grad: input length mismatch");
  }
  if (output_cotangent.size() != spec.output_size()) {
    throw InvalidArgument("mlp_eval_grad: cotangent length mismatch");
  }
  if constexpr (std::is_same_v<Scalar, double>) {
    require_finite(input, "mlp_eval_grad input");
  }
  MlpTape<Scalar> tape;
  MatrixX<Scalar> out = mlp_forward<Scalar>(spec, params, MatrixX<Scalar>(input), &tape);
  VectorX<Scalar> grad = mlp_backward<Scalar>(spec, params, tape, MatrixX<Scalar>(output_cotangent));
  return {VectorX<Scalar>(out.col(0)), std::move(grad)};
}

}  // namespace dpg
