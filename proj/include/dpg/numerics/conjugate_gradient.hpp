#pragma once

#include <dpg/core.hpp>

#include <cmath>
#include <vector>

namespace dpg {

struct CgTrace {
  std::vector<double> residual_norms;  // ||b - (A + damping I) x_k||, k = 0..
  std::vector<double> energies;        // 0.5 x'Mx - b'x, M = A + damping I
};

// Solves (A + damping I) x = b with at most `iters` conjugate gradient
// iterations. apply_A(v) must return A v for a symmetric PSD operator A.
template <typename ApplyA>
ParamVector conjugate_gradient(ApplyA&& apply_A, const ParamVector& b, int iters,
                               double damping, CgTrace* trace = nullptr) {
  if (iters < 1) throw InvalidArgument("conjugate_gradient: iters must be >= 1");
  if (damping < 0.0) throw InvalidArgument("conjugate_gradient: negative damping");
  ParamVector x = ParamVector::Zero(b.size());
  if (trace) {
    trace->residual_norms = {b.norm()};
    trace->energies = {0.0};
  }
  if (b.squaredNorm() == 0.0) return x;

  auto apply_m = [&](const ParamVector& v) -> ParamVector {
    ParamVector out = apply_A(v);
    if (out.size() != v.size()) throw InvalidArgument("conjugate_gradient: operator shape");
    if (damping > 0.0) out += damping * v;
    return out;
  };

  ParamVector r = b;
  ParamVector p = b;
  double rr = r.squaredNorm();
  const double stop = 1e-30 * b.squaredNorm();
  for (int it = 0; it < iters; ++it) {
    const ParamVector mp = apply_m(p);
    const double pmp = p.dot(mp);
    if (!std::isfinite(pmp)) throw NumericalError("conjugate_gradient: non-finite curvature");
    if (pmp <= 0.0) break;  // operator is singular along p
    const double alpha = rr / pmp;
    x += alpha * p;
    r -= alpha * mp;
    const double rr_next = r.squaredNorm();
    if (!std::isfinite(rr_next)) throw NumericalError("conjugate_gradient: non-finite residual");
    if (trace) {
      trace->residual_norms.push_back(std::sqrt(rr_next));
      // With exact arithmetic r = b - Mx, so 0.5 x'Mx - b'x = -0.5 x'(b + r).
      trace->energies.push_back(-0.5 * x.dot(b + r));
    }
    if (rr_next <= stop) break;
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  return x;
}

}  // namespace dpg
