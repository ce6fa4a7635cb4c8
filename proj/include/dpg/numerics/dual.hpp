#pragma once

#include <dpg/core.hpp>

#include <unsupported/Eigen/AutoDiff>

namespace dpg {

// Forward-mode scalar carrying one directional derivative. Running the
// scalar-templated reverse pass on Dual gives forward-over-reverse products.
using Dual = Eigen::AutoDiffScalar<Eigen::Matrix<double, 1, 1>>;

inline Dual make_dual(double value, double derivative) {
  return Dual(value, Eigen::Matrix<double, 1, 1>(derivative));
}

inline VectorX<Dual> make_dual(const Vector& values, const Vector& derivatives) {
  VectorX<Dual> out(values.size());
  for (Index i = 0; i < values.size(); ++i) out(i) = make_dual(values(i), derivatives(i));
  return out;
}

template <typename Derived>
MatrixX<Dual> lift_constant(const Eigen::MatrixBase<Derived>& values) {
  return values.template cast<double>().unaryExpr(
      [](double v) { return make_dual(v, 0.0); });
}

inline Vector dual_values(const VectorX<Dual>& v) {
  return v.unaryExpr([](const Dual& d) { return d.value(); });
}

inline Vector dual_derivatives(const VectorX<Dual>& v) {
  return v.unaryExpr([](const Dual& d) { return d.derivatives()(0); });
}

}  // namespace dpg
