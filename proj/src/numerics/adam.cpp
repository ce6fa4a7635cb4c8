#include <dpg/numerics/adam.hpp>

#include <algorithm>
#include <cmath>

namespace dpg {

AdamState AdamState::fresh(Index size, double lr, bool anneal, std::int64_t horizon) {
  if (!(lr > 0.0)) throw InvalidArgument("AdamState: learning rate must be positive");
  if (anneal && horizon <= 0) throw InvalidArgument("AdamState: annealing needs a positive horizon");
  AdamState s;
  s.first_moment = ParamVector::Zero(size);
  s.second_moment = ParamVector::Zero(size);
  s.base_lr = lr;
  s.anneal = anneal;
  s.horizon = horizon;
  return s;
}

double AdamState::effective_lr() const {
  if (!anneal) return base_lr;
  const double frac = 1.0 - static_cast<double>(step_count) / static_cast<double>(horizon);
  return base_lr * std::max(0.0, frac);
}

void adam_update(AdamState& state, Eigen::Ref<ParamVector> params, const ParamVector& grad) {
  if (params.size() != grad.size() || state.first_moment.size() != grad.size()) {
    throw InvalidArgument("adam: shape mismatch");
  }
  for (Index i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad(i))) {
      throw NumericalError("adam: non-finite gradient at index " + std::to_string(i), i);
    }
  }
  const double lr = state.effective_lr();
  state.step_count += 1;
  const auto t = static_cast<double>(state.step_count);
  state.first_moment = state.beta1 * state.first_moment + (1.0 - state.beta1) * grad;
  state.second_moment =
      state.beta2 * state.second_moment + (1.0 - state.beta2) * grad.cwiseProduct(grad);
  if (lr == 0.0) return;
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  params.array() -= lr * (state.first_moment.array() / c1) /
                    ((state.second_moment.array() / c2).sqrt() + state.epsilon);
}

std::pair<ParamVector, AdamState> adam_step(const AdamState& state, const ParamVector& params,
                                            const ParamVector& grad) {
  std::pair<ParamVector, AdamState> out{params, state};
  adam_update(out.second, out.first, grad);
  return out;
}

}  // namespace dpg
