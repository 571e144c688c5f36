#pragma once

// Thin wrappers over Eigen's FFT module. Each thread keeps its own engine
// so plan caches are never shared.

#include <unsupported/Eigen/FFT>

#include "qfield/grid.hpp"

namespace qfield::detail {

template <typename Scalar>
Eigen::FFT<Scalar>& fft_engine() {
  thread_local Eigen::FFT<Scalar> engine;
  return engine;
}

template <typename Derived>
ComplexVectorX<typename Eigen::NumTraits<typename Derived::Scalar>::Real> forward(
    const Eigen::MatrixBase<Derived>& values) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Input = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  const Input src = values;
  ComplexVectorX<Real> out(src.size());
  fft_engine<Real>().fwd(out, src);
  return out;
}

template <typename Scalar>
ComplexVectorX<Scalar> inverse(const ComplexVectorX<Scalar>& coeffs) {
  ComplexVectorX<Scalar> out(coeffs.size());
  fft_engine<Scalar>().inv(out, coeffs);
  return out;
}

/// Inverse transform keeping only the real part; callers guarantee a
/// Hermitian spectrum up to roundoff.
template <typename Scalar>
VectorX<Scalar> inverse_real(const ComplexVectorX<Scalar>& coeffs) {
  return inverse(coeffs).real();
}

/// i^power for integer power >= 0.
template <typename Scalar>
std::complex<Scalar> i_power(int power) {
  switch (power % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace qfield::detail
