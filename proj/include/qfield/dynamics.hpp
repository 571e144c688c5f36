#pragma once

// Time evolution of the field pair
//
//   dA/dt = -d^2 B + V B,   dB/dt = d^2 A - V A.
//
// The free flow is diagonal in Fourier space: every wavenumber k rotates
// the coefficient pair (A_k, B_k) by the angle k^2 t. The potential flow is
// a pointwise rotation by V(x) t. Both preserve M_0 exactly.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "qfield/invariants.hpp"
#include "qfield/potential.hpp"

namespace qfield {

enum class Scheme { spectral_free, split_step, leapfrog };

struct EvolveConfig {
  double t_final = 1.0;
  double dt = 1e-3;
  Scheme scheme = Scheme::split_step;
  int record_every = 10;
  int n_max = kDefaultNMax;
  double confinement_threshold = kDefaultConfinementThreshold;
};

template <typename Scalar>
struct EvolveResult {
  FieldState<Scalar> state;
  std::vector<DiagnosticsRecord<Scalar>> records;
};

/// Exact free propagation by t (any sign) in the discrete Fourier basis.
template <typename Scalar>
FieldState<Scalar> propagate_free_spectral(const FieldState<Scalar>& state, Scalar t) {
  if (!std::isfinite(t)) throw ValidationError("propagation time must be finite");
  if (t == Scalar(0)) return state;
  ComplexVectorX<Scalar> ca = detail::forward(state.a);
  ComplexVectorX<Scalar> cb = detail::forward(state.b);
  const VectorX<Scalar> k = state.grid.wavenumbers();
  for (Index i = 0; i < ca.size(); ++i) {
    const Scalar angle = k[i] * k[i] * t;
    const Scalar c = std::cos(angle);
    const Scalar s = std::sin(angle);
    const std::complex<Scalar> a0 = ca[i];
    ca[i] = c * a0 + s * cb[i];
    cb[i] = -s * a0 + c * cb[i];
  }
  return {state.grid, detail::inverse_real(ca), detail::inverse_real(cb), state.time + t};
}

namespace detail {

// m-th time derivative from spatial derivatives alone:
//   even m: d_t^m A = (-1)^{m/2} d_x^{2m} A
//   odd m:  d_t^m A = -(-1)^{(m-1)/2} d_x^{2m} B
// and the B counterpart via A -> B, B -> -A.
template <typename Scalar>
std::pair<VectorX<Scalar>, VectorX<Scalar>> time_derivative_any(const FieldState<Scalar>& state,
                                                                 int m) {
  const VectorX<Scalar> da = spatial_derivative(state.a, state.grid, 2 * m);
  const VectorX<Scalar> db = spatial_derivative(state.b, state.grid, 2 * m);
  if (m % 2 == 0) {
    const Scalar sign = (m / 2) % 2 == 0 ? Scalar(1) : Scalar(-1);
    return {sign * da, sign * db};
  }
  const Scalar sign = ((m - 1) / 2) % 2 == 0 ? Scalar(1) : Scalar(-1);
  return {-sign * db, sign * da};
}

// Fraction of spectral power in the outer half of the resolved band.
template <typename Scalar>
Scalar spectral_tail_fraction(const FieldState<Scalar>& state) {
  const ComplexVectorX<Scalar> ca = forward(state.a);
  const ComplexVectorX<Scalar> cb = forward(state.b);
  Scalar total = 0;
  Scalar tail = 0;
  const Index quarter = state.grid.n_points / 4;
  for (Index i = 0; i < ca.size(); ++i) {
    const Scalar power = std::norm(ca[i]) + std::norm(cb[i]);
    total += power;
    if (std::abs(state.grid.mode_index(i)) > quarter) tail += power;
  }
  return total > 0 ? tail / total : Scalar(0);
}

template <typename Scalar>
void rotate_pointwise(FieldState<Scalar>& state, const VectorX<Scalar>& angle) {
  for (Index i = 0; i < state.grid.n_points; ++i) {
    const Scalar c = std::cos(angle[i]);
    const Scalar s = std::sin(angle[i]);
    const Scalar a0 = state.a[i];
    state.a[i] = c * a0 + s * state.b[i];
    state.b[i] = -s * a0 + c * state.b[i];
  }
}

}  // namespace detail

/// (d_t^m A, d_t^m B) of the free equations, m >= 1.
template <typename Scalar>
std::pair<VectorX<Scalar>, VectorX<Scalar>> time_derivative(const FieldState<Scalar>& state,
                                                            int m) {
  if (m < 1) throw ValidationError("time derivative order must be at least 1");
  return detail::time_derivative_any(state, m);
}

/// Truncated Taylor series in t of the free evolution, through t^order.
template <typename Scalar>
FieldState<Scalar> propagate_taylor(const FieldState<Scalar>& state, Scalar t, int order) {
  if (order < 1) throw ValidationError("Taylor order must be at least 1");
  const Scalar tail = detail::spectral_tail_fraction(state);
  if (tail >= Scalar(1e-8)) {
    throw ValidationError("state is not band-limited enough for high derivatives (spectral tail " +
                          std::to_string(static_cast<double>(tail)) + ")");
  }
  FieldState<Scalar> out = state;
  out.time = state.time + t;
  if (t == Scalar(0)) return out;
  Scalar coeff = 1;
  for (int m = 1; m <= order; ++m) {
    coeff *= t / Scalar(m);
    const auto [da, db] = detail::time_derivative_any(state, m);
    out.a += coeff * da;
    out.b += coeff * db;
  }
  return out;
}

/// Energy integral \int [(dA)^2 + (dB)^2 + V (A^2 + B^2)] dx. For V = 0 this
/// is M_1 through the same code path as integrate_invariants.
template <typename Scalar>
Scalar energy(const FieldState<Scalar>& state, const PotentialSpec<Scalar>& potential) {
  const Scalar kinetic = integrate(density(state, 1));
  if (potential.is_free()) return kinetic;
  const VectorX<Scalar> v = sample_potential(potential, state.grid);
  return kinetic + integrate(v.cwiseProduct(density(state, 0).values).eval(), state.grid);
}

/// One Strang step: potential half rotation, exact free step, potential
/// half rotation.
template <typename Scalar>
FieldState<Scalar> step_split(const FieldState<Scalar>& state, const PotentialSpec<Scalar>& potential,
                              Scalar dt) {
  if (!(dt > 0)) throw ValidationError("time step must be positive");
  if (potential.is_free()) return propagate_free_spectral(state, dt);
  const VectorX<Scalar> half_angle = sample_potential(potential, state.grid) * (dt / Scalar(2));
  FieldState<Scalar> s = state;
  detail::rotate_pointwise(s, half_angle);
  s = propagate_free_spectral(s, dt);
  detail::rotate_pointwise(s, half_angle);
  return s;
}

template <typename Scalar>
Scalar leapfrog_dt_limit(const GridSpec<Scalar>& grid) {
  return grid.dx() * grid.dx() / pi<Scalar>;
}

/// Staggered step exploiting that A and B are each other's canonical
/// momenta: half kick of B, full drift of A, half kick of B. Uses the
/// second-order centered Laplacian.
template <typename Scalar>
FieldState<Scalar> step_leapfrog(const FieldState<Scalar>& state,
                                 const PotentialSpec<Scalar>& potential, Scalar dt) {
  if (!(dt > 0)) throw ValidationError("time step must be positive");
  const Scalar limit = leapfrog_dt_limit(state.grid);
  if (dt > limit) {
    throw ValidationError("leapfrog dt " + std::to_string(static_cast<double>(dt)) +
                          " exceeds stability bound dx^2/pi = " +
                          std::to_string(static_cast<double>(limit)));
  }
  const auto fd = DerivativeMethod::finite_difference;
  const VectorX<Scalar> v = sample_potential(potential, state.grid);
  FieldState<Scalar> s = state;
  const Scalar half = dt / Scalar(2);
  s.b += half * (spatial_derivative(s.a, s.grid, 2, fd) - v.cwiseProduct(s.a));
  s.a += dt * (-spatial_derivative(s.b, s.grid, 2, fd) + v.cwiseProduct(s.b));
  s.b += half * (spatial_derivative(s.a, s.grid, 2, fd) - v.cwiseProduct(s.a));
  s.time = state.time + dt;
  return s;
}

template <typename Scalar>
DiagnosticsRecord<Scalar> diagnose(const FieldState<Scalar>& state,
                                   const PotentialSpec<Scalar>& potential, int n_max,
                                   Scalar confinement_threshold) {
  DiagnosticsRecord<Scalar> rec = integrate_invariants(state, n_max);
  rec.energy = energy(state, potential);
  rec.confined = rec.boundary_max < confinement_threshold;
  return rec;
}

inline long step_count(const EvolveConfig& config) {
  if (!(config.t_final > 0)) throw ValidationError("t_final must be positive");
  if (!(config.dt > 0)) throw ValidationError("dt must be positive");
  if (config.record_every < 1) throw ValidationError("record_every must be at least 1");
  if (config.n_max < 1) throw ValidationError("n_max must be at least 1");
  if (!(config.confinement_threshold > 0)) {
    throw ValidationError("confinement threshold must be positive");
  }
  const double ratio = config.t_final / config.dt;
  const long steps = std::lround(ratio);
  if (steps < 1 || std::abs(ratio - double(steps)) > 1e-9 * ratio) {
    throw ValidationError("t_final must be an integer multiple of dt");
  }
  return steps;
}

template <typename Scalar>
using RecordObserver =
    std::function<void(const FieldState<Scalar>&, const DiagnosticsRecord<Scalar>&)>;

/// Advances to t_final with the configured scheme. Records are emitted for
/// the initial state, every record_every steps, and the final state. A
/// record with confined == false flags edge contamination mid-run. The
/// optional observer sees each recorded state alongside its record.
template <typename Scalar>
EvolveResult<Scalar> evolve(const FieldState<Scalar>& initial,
                            const PotentialSpec<Scalar>& potential, const EvolveConfig& config,
                            const RecordObserver<Scalar>& observer = {}) {
  const long steps = step_count(config);
  const Scalar dt = Scalar(config.dt);
  const Scalar threshold = Scalar(config.confinement_threshold);
  if (config.scheme == Scheme::spectral_free && !potential.is_free()) {
    throw ValidationError("spectral_free scheme only applies to the free system");
  }
  if (config.scheme == Scheme::leapfrog && dt > leapfrog_dt_limit(initial.grid)) {
    throw ValidationError("leapfrog dt exceeds stability bound dx^2/pi");
  }
  sample_potential(potential, initial.grid);

  EvolveResult<Scalar> result{initial, {}};
  result.records.push_back(diagnose(initial, potential, config.n_max, threshold));
  if (observer) observer(initial, result.records.back());
  FieldState<Scalar>& s = result.state;
  for (long step = 1; step <= steps; ++step) {
    const bool record = step % config.record_every == 0 || step == steps;
    switch (config.scheme) {
      case Scheme::spectral_free:
        // One exact jump from the initial state per record point.
        if (record) {
          s = propagate_free_spectral(initial, Scalar(step) * dt);
        }
        break;
      case Scheme::split_step:
        s = step_split(s, potential, dt);
        break;
      case Scheme::leapfrog:
        s = step_leapfrog(s, potential, dt);
        break;
    }
    if (record) {
      s.time = initial.time + Scalar(step) * dt;
      result.records.push_back(diagnose(s, potential, config.n_max, threshold));
      if (observer) observer(s, result.records.back());
    }
  }
  return result;
}

}  // namespace qfield
