#pragma once

// n-densities, n-currents and their integrals over the periodic box.
//
//   M_n(x) = (d^n A)^2 + (d^n B)^2
//   P_n(x) = d^n A d^{n+1} B - d^n B d^{n+1} A
//
// Integrals use the rectangle rule, which is spectrally accurate for
// periodic or confined integrands.

#include <algorithm>
#include <limits>

#include "qfield/derivative.hpp"
#include "qfield/field_state.hpp"

namespace qfield {

inline constexpr double kDefaultConfinementThreshold = 1e-12;
inline constexpr int kDefaultNMax = 3;

template <typename Derived>
typename Derived::Scalar integrate(const Eigen::MatrixBase<Derived>& values,
                                   const GridSpec<typename Derived::Scalar>& grid) {
  return values.sum() * grid.dx();
}

template <typename Scalar>
Scalar integrate(const DensityProfile<Scalar>& profile) {
  return integrate(profile.values, profile.grid);
}

namespace detail {

template <typename Scalar>
void require_order(int n) {
  if (n < 0) throw ValidationError("density/current order must be non-negative");
}

}  // namespace detail

template <typename Scalar>
DensityProfile<Scalar> density(const FieldState<Scalar>& state, int n,
                               DerivativeMethod method = DerivativeMethod::spectral) {
  detail::require_order<Scalar>(n);
  const VectorX<Scalar> da = spatial_derivative(state.a, state.grid, n, method);
  const VectorX<Scalar> db = spatial_derivative(state.b, state.grid, n, method);
  return {state.grid, (da.array().square() + db.array().square()).matrix(), n,
          ProfileKind::density};
}

template <typename Scalar>
DensityProfile<Scalar> current(const FieldState<Scalar>& state, int n,
                               DerivativeMethod method = DerivativeMethod::spectral) {
  detail::require_order<Scalar>(n);
  const VectorX<Scalar> da = spatial_derivative(state.a, state.grid, n, method);
  const VectorX<Scalar> db = spatial_derivative(state.b, state.grid, n, method);
  const VectorX<Scalar> da1 = spatial_derivative(state.a, state.grid, n + 1, method);
  const VectorX<Scalar> db1 = spatial_derivative(state.b, state.grid, n + 1, method);
  return {state.grid, (da.cwiseProduct(db1) - db.cwiseProduct(da1)), n, ProfileKind::current};
}

/// Largest |A| or |B| over the outermost 2% of samples on each side.
template <typename Scalar>
Scalar boundary_max(const FieldState<Scalar>& state) {
  const Index n = state.grid.n_points;
  const Index band = std::max<Index>(1, n / 50);
  Scalar worst = 0;
  for (Index i = 0; i < band; ++i) {
    for (Index j : {i, n - 1 - i}) {
      worst = std::max({worst, std::abs(state.a[j]), std::abs(state.b[j])});
    }
  }
  return worst;
}

/// Numerical stand-in for decay at infinity on a periodic box.
template <typename Scalar>
bool confinement_check(const FieldState<Scalar>& state,
                       Scalar threshold = Scalar(kDefaultConfinementThreshold)) {
  if (!(threshold > 0)) throw ValidationError("confinement threshold must be positive");
  return boundary_max(state) < threshold;
}

/// Unnormalized first moment of the n-density, integral of x * M_n(x).
template <typename Scalar>
Scalar first_moment(const FieldState<Scalar>& state, int n,
                    DerivativeMethod method = DerivativeMethod::spectral) {
  const auto rho = density(state, n, method);
  return integrate(state.grid.coordinates().cwiseProduct(rho.values), state.grid);
}

/// Center of the localization distribution, normalized by M_0.
template <typename Scalar>
Scalar center(const FieldState<Scalar>& state,
              Scalar threshold = Scalar(kDefaultConfinementThreshold)) {
  if (!confinement_check(state, threshold)) {
    throw ValidationError("center() requires a confined state (edge amplitude above threshold)");
  }
  const auto rho = density(state, 0);
  const Scalar m0 = integrate(rho);
  if (!(m0 > 0)) throw ValidationError("center() requires M0 > 0");
  return integrate(state.grid.coordinates().cwiseProduct(rho.values), state.grid) / m0;
}

template <typename Scalar>
FieldState<Scalar> normalize(const FieldState<Scalar>& state) {
  const Scalar m0 = integrate(density(state, 0));
  if (!(m0 > 0)) throw ValidationError("cannot normalize a zero field");
  const Scalar scale = Scalar(1) / std::sqrt(m0);
  return {state.grid, state.a * scale, state.b * scale, state.time};
}

namespace detail {

template <typename Scalar>
DiagnosticsRecord<Scalar> finish_record(const FieldState<Scalar>& state,
                                        DiagnosticsRecord<Scalar> rec) {
  rec.time = state.time;
  rec.boundary_max = boundary_max(state);
  rec.confined = rec.boundary_max < Scalar(kDefaultConfinementThreshold);
  const Scalar m0 = integrate(density(state, 0));
  rec.center = m0 > 0 ? first_moment(state, 0) / m0 : std::numeric_limits<Scalar>::quiet_NaN();
  rec.energy = rec.m[1];
  return rec;
}

}  // namespace detail

/// M_n and P_n for n <= n_max from the density/current forms. The energy
/// slot holds M_1, the free Hamiltonian; potential runs overwrite it.
template <typename Scalar>
DiagnosticsRecord<Scalar> integrate_invariants(const FieldState<Scalar>& state,
                                               int n_max = kDefaultNMax) {
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  const auto da = derivative_ladder(state.a, state.grid, n_max + 1);
  const auto db = derivative_ladder(state.b, state.grid, n_max + 1);
  DiagnosticsRecord<Scalar> rec;
  for (int n = 0; n <= n_max; ++n) {
    rec.m.push_back(integrate(
        (da[n].array().square() + db[n].array().square()).matrix().eval(), state.grid));
    rec.p.push_back(integrate(
        (da[n].cwiseProduct(db[n + 1]) - db[n].cwiseProduct(da[n + 1])).eval(), state.grid));
  }
  return detail::finish_record(state, std::move(rec));
}

/// Same integrals after n integrations by parts:
///   M_n = (-1)^n \int (A d^{2n} A + B d^{2n} B)
///   P_n = (-1)^n \int (A d^{2n+1} B - B d^{2n+1} A)
template <typename Scalar>
DiagnosticsRecord<Scalar> integrate_invariants_by_parts(const FieldState<Scalar>& state,
                                                        int n_max = kDefaultNMax) {
  if (n_max < 1) throw ValidationError("n_max must be at least 1");
  const auto da = derivative_ladder(state.a, state.grid, 2 * n_max + 1);
  const auto db = derivative_ladder(state.b, state.grid, 2 * n_max + 1);
  DiagnosticsRecord<Scalar> rec;
  for (int n = 0; n <= n_max; ++n) {
    const Scalar sign = n % 2 == 0 ? Scalar(1) : Scalar(-1);
    rec.m.push_back(sign * integrate((state.a.cwiseProduct(da[2 * n]) +
                                      state.b.cwiseProduct(db[2 * n]))
                                         .eval(),
                                     state.grid));
    rec.p.push_back(sign * integrate((state.a.cwiseProduct(db[2 * n + 1]) -
                                      state.b.cwiseProduct(da[2 * n + 1]))
                                         .eval(),
                                     state.grid));
  }
  return detail::finish_record(state, std::move(rec));
}

/// d_t M_n + 2 d_x P_n with d_t M_n obtained by substituting the equations
/// of motion (dA/dt = -d^2 B + V B, dB/dt = d^2 A - V A). No time stepping
/// is involved, so the result measures spatial discretization error only.
template <typename Scalar>
DensityProfile<Scalar> continuity_residual(const FieldState<Scalar>& state, int n,
                                           const VectorX<Scalar>& potential,
                                           DerivativeMethod method = DerivativeMethod::spectral) {
  detail::require_order<Scalar>(n);
  if (potential.size() != state.grid.n_points) {
    throw ValidationError("potential sample count does not match grid");
  }
  const auto& g = state.grid;
  const VectorX<Scalar> a_dot =
      -spatial_derivative(state.b, g, 2, method) + potential.cwiseProduct(state.b);
  const VectorX<Scalar> b_dot =
      spatial_derivative(state.a, g, 2, method) - potential.cwiseProduct(state.a);
  const VectorX<Scalar> da = spatial_derivative(state.a, g, n, method);
  const VectorX<Scalar> db = spatial_derivative(state.b, g, n, method);
  const VectorX<Scalar> dm_dt = Scalar(2) * (da.cwiseProduct(spatial_derivative(a_dot, g, n, method)) +
                                             db.cwiseProduct(spatial_derivative(b_dot, g, n, method)));
  const VectorX<Scalar> flux = current(state, n, method).values;
  return {g, dm_dt + Scalar(2) * spatial_derivative(flux, g, 1, method), n, ProfileKind::residual};
}

template <typename Scalar>
DensityProfile<Scalar> continuity_residual(const FieldState<Scalar>& state, int n,
                                           DerivativeMethod method = DerivativeMethod::spectral) {
  return continuity_residual(state, n, VectorX<Scalar>::Zero(state.grid.n_points).eval(), method);
}

}  // namespace qfield
