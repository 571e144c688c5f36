#pragma once

#include <limits>
#include <vector>

#include "qfield/grid.hpp"

namespace qfield {

/// The real field pair (A, B) sampled on a grid at one instant.
template <typename Scalar>
struct FieldState {
  GridSpec<Scalar> grid;
  VectorX<Scalar> a;
  VectorX<Scalar> b;
  Scalar time = 0;

  static FieldState zero(const GridSpec<Scalar>& grid, Scalar time = 0) {
    return {grid, VectorX<Scalar>::Zero(grid.n_points), VectorX<Scalar>::Zero(grid.n_points), time};
  }

  bool finite() const { return a.allFinite() && b.allFinite(); }
};

/// Builds a state after checking shapes and finiteness.
template <typename Scalar>
FieldState<Scalar> make_state(const GridSpec<Scalar>& grid, VectorX<Scalar> a, VectorX<Scalar> b,
                              Scalar time = 0) {
  if (a.size() != grid.n_points || b.size() != grid.n_points) {
    throw ValidationError("field sample count does not match grid");
  }
  FieldState<Scalar> s{grid, std::move(a), std::move(b), time};
  if (!s.finite() || !std::isfinite(time)) throw ValidationError("field samples must be finite");
  return s;
}

enum class ProfileKind { density, current, residual };

/// Pointwise n-density, n-current or continuity residual at fixed time.
template <typename Scalar>
struct DensityProfile {
  GridSpec<Scalar> grid;
  VectorX<Scalar> values;
  int order = 0;
  ProfileKind kind = ProfileKind::density;
};

/// One time slice of integrated invariants. Entries that are not known
/// (for example unpredicted orders) hold NaN.
template <typename Scalar>
struct DiagnosticsRecord {
  Scalar time = 0;
  std::vector<Scalar> m;  // M_0..M_nmax
  std::vector<Scalar> p;  // P_0..P_nmax
  Scalar center = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar energy = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar boundary_max = 0;
  bool confined = true;

  int n_max() const { return static_cast<int>(m.size()) - 1; }
};

}  // namespace qfield
