#pragma once

#include <dpg/core.hpp>

#include <cstdint>
#include <utility>

namespace dpg {

struct AdamState {
  ParamVector first_moment;
  ParamVector second_moment;
  std::int64_t step_count = 0;
  double base_lr = 1e-4;
  bool anneal = false;
  std::int64_t horizon = 0;  // updates until the annealed rate reaches zero
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState fresh(Index size, double lr, bool anneal = false,
                         std::int64_t horizon = 0);

  // base_lr * max(0, 1 - step_count / horizon) when annealing.
  double effective_lr() const;
};

// Bias-corrected Adam descent step: params - lr * mhat / (sqrt(vhat) + eps).
// Throws NumericalError carrying the index of the first non-finite gradient.
std::pair<ParamVector, AdamState> adam_step(const AdamState& state,
                                            const ParamVector& params,
                                            const ParamVector& grad);

// In-place variant used inside training loops.
void adam_update(AdamState& state, Eigen::Ref<ParamVector> params, const ParamVector& grad);

}  // namespace dpg
