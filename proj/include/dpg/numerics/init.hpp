#pragma once

#include <dpg/numerics/mlp.hpp>

#include <cstdint>
#include <span>

namespace dpg {

// Orthogonal weights scaled per layer, zero biases. Each weight block W
// satisfies W W^T = gain^2 I when it is wide and W^T W = gain^2 I when tall.
// Gains are indexed by weight layer.
ParamVector orthogonal_init(const MlpSpec& spec, std::span<const double> gains,
                            std::uint64_t seed);

// Hidden layers sqrt(2), output layer `output_gain` (0.01 for policy means,
// 1.0 for value heads).
std::vector<double> standard_gains(const MlpSpec& spec, double output_gain);

// Default dense-layer init: weights and biases uniform in
// [-1/sqrt(fan_in), 1/sqrt(fan_in)].
ParamVector default_init(const MlpSpec& spec, std::uint64_t seed);

}  // namespace dpg
