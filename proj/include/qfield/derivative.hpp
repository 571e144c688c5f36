#pragma once

#include <string>
#include <vector>

#include "qfield/grid.hpp"
#include "qfield/spectral.hpp"

namespace qfield {

enum class DerivativeMethod { spectral, finite_difference };

namespace detail {

// Zeroes coefficients at the roundoff floor of the transform. Left alone,
// they are amplified by k^order and dominate high derivatives of
// well-resolved fields.
template <typename Scalar>
void chop_noise(ComplexVectorX<Scalar>& coeffs) {
  const Scalar floor = Scalar(1e-15) * coeffs.cwiseAbs().maxCoeff();
  for (Index i = 0; i < coeffs.size(); ++i) {
    if (std::abs(coeffs[i]) < floor) coeffs[i] = 0;
  }
}

// Multiplies DFT coefficients by (ik)^order. The Nyquist bin has no
// well-defined sign for odd orders, so it is dropped there to keep real
// input real.
template <typename Scalar>
void apply_derivative_symbol(ComplexVectorX<Scalar>& coeffs, const GridSpec<Scalar>& grid,
                             int order) {
  if (order == 0) return;
  chop_noise(coeffs);
  const VectorX<Scalar> k = grid.wavenumbers();
  const std::complex<Scalar> phase = i_power<Scalar>(order);
  for (Index i = 0; i < coeffs.size(); ++i) {
    coeffs[i] *= phase * std::pow(k[i], order);
  }
  if (order % 2 == 1 && grid.has_nyquist()) coeffs[grid.nyquist_bin()] = 0;
}

// Second-order centered stencils, periodic wrap.
template <typename Scalar>
VectorX<Scalar> finite_difference(const VectorX<Scalar>& f, const GridSpec<Scalar>& grid,
                                  int order) {
  const Index n = f.size();
  const Scalar h = grid.dx();
  auto at = [&](Index i) { return f[((i % n) + n) % n]; };
  VectorX<Scalar> out(n);
  for (Index i = 0; i < n; ++i) {
    switch (order) {
      case 1:
        out[i] = (at(i + 1) - at(i - 1)) / (Scalar(2) * h);
        break;
      case 2:
        out[i] = (at(i + 1) - Scalar(2) * at(i) + at(i - 1)) / (h * h);
        break;
      case 3:
        out[i] = (at(i + 2) - Scalar(2) * at(i + 1) + Scalar(2) * at(i - 1) - at(i - 2)) /
                 (Scalar(2) * h * h * h);
        break;
      case 4:
        out[i] = (at(i + 2) - Scalar(4) * at(i + 1) + Scalar(6) * at(i) - Scalar(4) * at(i - 1) +
                  at(i - 2)) /
                 (h * h * h * h);
        break;
      default:
        throw ValidationError("finite-difference stencils exist for orders 1..4, got " +
                              std::to_string(order));
    }
  }
  return out;
}

}  // namespace detail

/// n-th periodic derivative of sampled values. Order 0 returns the input.
template <typename Derived>
VectorX<typename Derived::Scalar> spatial_derivative(
    const Eigen::MatrixBase<Derived>& values, const GridSpec<typename Derived::Scalar>& grid,
    int order, DerivativeMethod method = DerivativeMethod::spectral) {
  using Scalar = typename Derived::Scalar;
  if (order < 0) throw ValidationError("derivative order must be non-negative");
  if (values.size() != grid.n_points) throw ValidationError("sample count does not match grid");
  const VectorX<Scalar> f = values;
  if (order == 0) return f;
  if (method == DerivativeMethod::finite_difference) {
    return detail::finite_difference(f, grid, order);
  }
  ComplexVectorX<Scalar> coeffs = detail::forward(f);
  detail::apply_derivative_symbol(coeffs, grid, order);
  return detail::inverse_real(coeffs);
}

/// Derivatives of orders 0..max_order sharing one forward transform.
template <typename Derived>
std::vector<VectorX<typename Derived::Scalar>> derivative_ladder(
    const Eigen::MatrixBase<Derived>& values, const GridSpec<typename Derived::Scalar>& grid,
    int max_order, DerivativeMethod method = DerivativeMethod::spectral) {
  using Scalar = typename Derived::Scalar;
  if (max_order < 0) throw ValidationError("derivative order must be non-negative");
  if (values.size() != grid.n_points) throw ValidationError("sample count does not match grid");
  std::vector<VectorX<Scalar>> out;
  out.reserve(max_order + 1);
  const VectorX<Scalar> f = values;
  out.push_back(f);
  if (method == DerivativeMethod::finite_difference) {
    for (int order = 1; order <= max_order; ++order) {
      out.push_back(detail::finite_difference(f, grid, order));
    }
    return out;
  }
  const ComplexVectorX<Scalar> base = detail::forward(f);
  for (int order = 1; order <= max_order; ++order) {
    ComplexVectorX<Scalar> coeffs = base;
    detail::apply_derivative_symbol(coeffs, grid, order);
    out.push_back(detail::inverse_real(coeffs));
  }
  return out;
}

}  // namespace qfield
