#pragma once

// Reference computations in the complex field Psi = A + iB, written
// directly against i dPsi/dt = -Psi'' + V Psi (hbar = 1, m = 1/2). Nothing
// here calls into the real-pair dynamics, derivative or invariant code.

#include <cmath>
#include <complex>

#include "qfield/field_state.hpp"
#include "qfield/potential.hpp"
#include "qfield/spectral.hpp"

namespace qfield::oracle {

template <typename Scalar>
struct ComplexState {
  GridSpec<Scalar> grid;
  ComplexVectorX<Scalar> psi;
  Scalar time = 0;
};

template <typename Scalar>
struct GaussianParams {
  Scalar x0 = 0;
  Scalar sigma = 1;
  Scalar k = 0;
  Scalar t = 0;
};

template <typename Scalar>
struct Expectation {
  Scalar value = 0;
  Scalar imag_residual = 0;
};

template <typename Scalar>
ComplexState<Scalar> to_complex(const FieldState<Scalar>& state) {
  ComplexVectorX<Scalar> psi(state.grid.n_points);
  for (Index i = 0; i < psi.size(); ++i) psi[i] = {state.a[i], state.b[i]};
  return {state.grid, std::move(psi), state.time};
}

template <typename Scalar>
FieldState<Scalar> from_complex(const ComplexState<Scalar>& cstate) {
  return {cstate.grid, cstate.psi.real(), cstate.psi.imag(), cstate.time};
}

/// Strang split-step for i Psi_t = -Psi'' + V Psi.
template <typename Scalar>
ComplexState<Scalar> schrodinger_evolve(const ComplexState<Scalar>& cstate,
                                        const PotentialSpec<Scalar>& potential, Scalar t_final,
                                        Scalar dt) {
  if (!(dt > 0)) throw ValidationError("time step must be positive");
  if (!(t_final >= 0)) throw ValidationError("t_final must be non-negative");
  const long steps = std::lround(double(t_final / dt));
  if (std::abs(double(t_final) - double(steps) * double(dt)) > 1e-9 * std::max(1.0, double(t_final))) {
    throw ValidationError("t_final must be an integer multiple of dt");
  }
  const auto& g = cstate.grid;
  const VectorX<Scalar> v = sample_potential(potential, g);
  const VectorX<Scalar> k = g.wavenumbers();
  ComplexVectorX<Scalar> half_kick(g.n_points);
  ComplexVectorX<Scalar> drift(g.n_points);
  for (Index i = 0; i < g.n_points; ++i) {
    half_kick[i] = std::polar(Scalar(1), -v[i] * dt / Scalar(2));
    drift[i] = std::polar(Scalar(1), -k[i] * k[i] * dt);
  }
  ComplexVectorX<Scalar> psi = cstate.psi;
  for (long s = 0; s < steps; ++s) {
    psi = psi.cwiseProduct(half_kick);
    ComplexVectorX<Scalar> spec = detail::forward(psi);
    spec = spec.cwiseProduct(drift);
    psi = detail::inverse(spec);
    psi = psi.cwiseProduct(half_kick);
  }
  return {g, std::move(psi), cstate.time + Scalar(steps) * dt};
}

/// Applies (-i d/dx)^order spectrally.
template <typename Scalar>
ComplexVectorX<Scalar> momentum_power(const ComplexState<Scalar>& cstate, int order) {
  ComplexVectorX<Scalar> spec = detail::forward(cstate.psi);
  const VectorX<Scalar> k = cstate.grid.wavenumbers();
  for (Index i = 0; i < spec.size(); ++i) spec[i] *= std::pow(k[i], order);
  return detail::inverse(spec);
}

/// <Psi, (-i d/dx)^order Psi>. The imaginary part should vanish and is
/// returned as a sanity residual.
template <typename Scalar>
Expectation<Scalar> moment_expectation(const ComplexState<Scalar>& cstate, int order) {
  if (order < 0) throw ValidationError("moment order must be non-negative");
  const ComplexVectorX<Scalar> applied = momentum_power(cstate, order);
  const std::complex<Scalar> inner = cstate.psi.dot(applied) * cstate.grid.dx();
  return {inner.real(), std::abs(inner.imag())};
}

/// Closed-form free Gaussian,
///   Psi = (pi s^2)^{-1/4} q^{-1/2} exp(-(x - x0 - 2kt)^2 / (2 s^2 q)) exp(i(kx - k^2 t)),
/// with q = 1 + 2it/s^2.
template <typename Scalar>
ComplexState<Scalar> gaussian_analytic(const GaussianParams<Scalar>& p,
                                       const GridSpec<Scalar>& grid) {
  if (!(p.sigma > 0)) throw ValidationError("sigma must be positive");
  using C = std::complex<Scalar>;
  const Scalar s2 = p.sigma * p.sigma;
  const C q(1, Scalar(2) * p.t / s2);
  const C prefactor = std::pow(pi<Scalar> * s2, Scalar(-0.25)) / std::sqrt(q);
  ComplexVectorX<Scalar> psi(grid.n_points);
  for (Index i = 0; i < grid.n_points; ++i) {
    const Scalar x = grid.x(i);
    const Scalar d = x - p.x0 - Scalar(2) * p.k * p.t;
    psi[i] = prefactor * std::exp(-d * d / (Scalar(2) * s2 * q)) *
             std::polar(Scalar(1), p.k * x - p.k * p.k * p.t);
  }
  return {grid, std::move(psi), p.t};
}

/// Standard deviation of |Psi|^2 for the free Gaussian at time t.
template <typename Scalar>
Scalar gaussian_width(Scalar sigma, Scalar t) {
  const Scalar tau = Scalar(2) * t / (sigma * sigma);
  return sigma / std::sqrt(Scalar(2)) * std::sqrt(Scalar(1) + tau * tau);
}

/// Standard deviation of |Psi|^2 by rectangle-rule quadrature.
template <typename Scalar>
Scalar measured_width(const ComplexState<Scalar>& cstate) {
  const auto& g = cstate.grid;
  Scalar norm = 0;
  Scalar first = 0;
  Scalar second = 0;
  for (Index i = 0; i < g.n_points; ++i) {
    const Scalar w = std::norm(cstate.psi[i]);
    const Scalar x = g.x(i);
    norm += w;
    first += w * x;
    second += w * x * x;
  }
  const Scalar mean = first / norm;
  return std::sqrt(second / norm - mean * mean);
}

}  // namespace qfield::oracle
