#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Core>

#include "qfield/error.hpp"

namespace qfield {

using Eigen::Index;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexVectorX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
constexpr Scalar pi = Scalar(3.141592653589793238462643383279502884L);

/// Uniform periodic 1D grid. Sample i sits at x_min + i*dx; x_max is
/// identified with x_min and is not itself a sample.
template <typename Scalar>
struct GridSpec {
  Scalar x_min = Scalar(-40);
  Scalar x_max = Scalar(40);
  Index n_points = 1024;

  Scalar length() const { return x_max - x_min; }
  Scalar dx() const { return length() / Scalar(n_points); }
  Scalar x(Index i) const { return x_min + Scalar(i) * dx(); }

  VectorX<Scalar> coordinates() const {
    VectorX<Scalar> xs(n_points);
    for (Index i = 0; i < n_points; ++i) xs[i] = x(i);
    return xs;
  }

  /// Integer wavenumber index of DFT bin i, in [-n/2, n/2).
  Index mode_index(Index i) const { return i <= (n_points - 1) / 2 ? i : i - n_points; }

  /// Angular wavenumbers 2*pi*j/L in DFT bin order.
  VectorX<Scalar> wavenumbers() const {
    VectorX<Scalar> k(n_points);
    const Scalar base = Scalar(2) * pi<Scalar> / length();
    for (Index i = 0; i < n_points; ++i) k[i] = base * Scalar(mode_index(i));
    return k;
  }

  bool has_nyquist() const { return n_points % 2 == 0; }
  Index nyquist_bin() const { return n_points / 2; }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

template <typename Scalar>
GridSpec<Scalar> make_grid(Scalar x_min, Scalar x_max, Index n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw ValidationError("grid span must be finite and positive (x_max > x_min)");
  }
  if (n_points < 8) {
    throw ValidationError("grid needs at least 8 points, got " + std::to_string(n_points));
  }
  return GridSpec<Scalar>{x_min, x_max, n_points};
}

}  // namespace qfield
