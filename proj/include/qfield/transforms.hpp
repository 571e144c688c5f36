#pragma once

// Symmetries of the field equations: constant internal rotation, Galilean
// boost and spatial translation.

#include <cmath>
#include <limits>

#include "qfield/invariants.hpp"

namespace qfield {

/// Constant mixing A' = cA - sB, B' = sA + cB.
template <typename Scalar>
struct RotationParams {
  Scalar c = 1;
  Scalar s = 0;

  static RotationParams from_angle(Scalar angle) { return {std::cos(angle), std::sin(angle)}; }
  Scalar scale() const { return c * c + s * s; }
  bool unit_modulus() const { return std::abs(scale() - Scalar(1)) < Scalar(1e-12); }
};

template <typename Scalar>
struct BoostParams {
  Scalar v = 0;
};

template <typename Scalar>
FieldState<Scalar> phase_rotate(const FieldState<Scalar>& state,
                                const RotationParams<Scalar>& params) {
  if (!std::isfinite(params.c) || !std::isfinite(params.s)) {
    throw ValidationError("rotation constants must be finite");
  }
  return {state.grid, params.c * state.a - params.s * state.b,
          params.s * state.a + params.c * state.b, state.time};
}

namespace detail {

// f(x) -> f(x - shift) by a phase ramp in wavenumber space. The Nyquist bin
// only takes the real part of the ramp so real samples stay real.
template <typename Scalar>
VectorX<Scalar> spectral_shift(const VectorX<Scalar>& f, const GridSpec<Scalar>& grid,
                               Scalar shift) {
  const ComplexVectorX<Scalar> original = forward(f);
  ComplexVectorX<Scalar> coeffs = original;
  const VectorX<Scalar> k = grid.wavenumbers();
  for (Index i = 0; i < coeffs.size(); ++i) {
    coeffs[i] *= std::polar(Scalar(1), -k[i] * shift);
  }
  if (grid.has_nyquist()) {
    const Index ny = grid.nyquist_bin();
    coeffs[ny] = original[ny] * std::cos(k[ny] * shift);
  }
  return inverse_real(coeffs);
}

}  // namespace detail

/// Shifts both fields by `shift` (f(x) -> f(x - shift)) with spectral
/// interpolation, so any real displacement is allowed.
template <typename Scalar>
FieldState<Scalar> translate(const FieldState<Scalar>& state, Scalar shift) {
  if (!std::isfinite(shift)) throw ValidationError("shift must be finite");
  if (shift == Scalar(0)) return state;
  return {state.grid, detail::spectral_shift(state.a, state.grid, shift),
          detail::spectral_shift(state.b, state.grid, shift), state.time};
}

/// Galilean boost at the state's own time t:
///   (A', B')(x) = R(theta(x)) (A, B)(x - v t),  theta = (v/2)(x - v t / 2)
/// where R is the internal rotation.
template <typename Scalar>
FieldState<Scalar> boost(const FieldState<Scalar>& state, const BoostParams<Scalar>& params,
                         Scalar threshold = Scalar(kDefaultConfinementThreshold)) {
  const Scalar v = params.v;
  if (!std::isfinite(v)) throw ValidationError("boost velocity must be finite");
  if (!confinement_check(state, threshold)) {
    throw ValidationError("boost requires a confined state (edge amplitude above threshold)");
  }
  if (v == Scalar(0)) return state;
  const Scalar t = state.time;
  const FieldState<Scalar> shifted = translate(state, v * t);
  FieldState<Scalar> out = shifted;
  for (Index i = 0; i < state.grid.n_points; ++i) {
    const Scalar theta = v / Scalar(2) * (state.grid.x(i) - v / Scalar(2) * t);
    const Scalar c = std::cos(theta);
    const Scalar s = std::sin(theta);
    out.a[i] = c * shifted.a[i] - s * shifted.b[i];
    out.b[i] = s * shifted.a[i] + c * shifted.b[i];
  }
  return out;
}

/// Post-boost M_0, P_0, M_1 and center for a normalized record:
///   P_0' = P_0 + v/2,  M_1' = M_1 + v P_0 + (v/2)^2,  X' = X + v t.
/// Higher orders have no closed prediction here and are NaN.
template <typename Scalar>
DiagnosticsRecord<Scalar> predict_boosted_invariants(const DiagnosticsRecord<Scalar>& record,
                                                     Scalar v) {
  if (record.m.size() < 2 || record.p.empty()) {
    throw ValidationError("record must carry at least M0, M1 and P0");
  }
  if (std::abs(record.m[0] - Scalar(1)) > Scalar(1e-9)) {
    throw ValidationError("boost prediction assumes M0 = 1; normalize the state first");
  }
  if (v == Scalar(0)) return record;
  constexpr Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
  DiagnosticsRecord<Scalar> out = record;
  std::fill(out.m.begin(), out.m.end(), nan);
  std::fill(out.p.begin(), out.p.end(), nan);
  out.m[0] = record.m[0];
  out.p[0] = record.p[0] + v / Scalar(2);
  out.m[1] = record.m[1] + v * record.p[0] + (v / Scalar(2)) * (v / Scalar(2));
  out.center = record.center + v * record.time;
  out.energy = nan;
  out.boundary_max = nan;
  return out;
}

/// Max-norm distance between two states after removing the best constant
/// unit-modulus rotation of `b` onto `a`. States related by such a rotation
/// are treated as physically equivalent.
template <typename Scalar>
Scalar phase_aligned_distance(const FieldState<Scalar>& a, const FieldState<Scalar>& b) {
  if (!(a.grid == b.grid)) throw ValidationError("states live on different grids");
  const Scalar dot = a.a.dot(b.a) + a.b.dot(b.b);
  const Scalar cross = a.b.dot(b.a) - a.a.dot(b.b);
  const auto rot = RotationParams<Scalar>::from_angle(std::atan2(cross, dot));
  const FieldState<Scalar> aligned = phase_rotate(b, rot);
  return std::max((aligned.a - a.a).cwiseAbs().maxCoeff(), (aligned.b - a.b).cwiseAbs().maxCoeff());
}

}  // namespace qfield
