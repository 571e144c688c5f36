#pragma once

// Stationary solutions: free plane waves and bound modes of -d^2 + V, plus
// the checks that a trajectory really is stationary (rigid rotation in the
// (A, B) plane at angular frequency E, constant currents, density ladder).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qfield/dynamics.hpp"
#include "qfield/transforms.hpp"

namespace qfield {

template <typename Scalar>
struct Mode {
  Scalar energy = 0;
  VectorX<Scalar> profile;  // normalized so that \int phi^2 dx = 1
  GridSpec<Scalar> grid;
  bool confined = true;
  Scalar residual = 0;  // L2 norm of (-d^2 + V) phi - E phi
};

template <typename Scalar>
struct StationaryReport {
  Scalar e_fit = 0;
  std::vector<Scalar> current_ratio_errors;   // n = 1..3: |P_n / P_{n-1} - E|
  std::vector<Scalar> density_ladder_errors;  // n = 2, 3 (free only)
  Scalar c_fit = std::numeric_limits<Scalar>::quiet_NaN();
  Scalar c_fit_residual = std::numeric_limits<Scalar>::quiet_NaN();
  bool c_admissible = false;                  // C > max M_0
  std::vector<Scalar> current_spread;         // max over t of (max_x - min_x) P_n(x), n = 0..3
  std::vector<Scalar> current_mean;           // spatial mean of P_n(x) at t = 0
  Scalar density_time_variation = 0;          // max |M_0(x,t) - M_0(x,0)| / max M_0
  Scalar current_time_variation = 0;          // max |P_0(x,t) - P_0(x,0)| / max M_0
  bool stationary = false;
};

/// Stationary energy is admissible only when strictly positive.
template <typename Scalar>
bool admissible_stationary_energy(Scalar energy) {
  return energy > Scalar(0);
}

/// A = cos(kx), B = sin(kx). k must fit the periodic box.
template <typename Scalar>
FieldState<Scalar> plane_wave_state(Scalar k, const GridSpec<Scalar>& grid) {
  const Scalar cycles = k * grid.length() / (Scalar(2) * pi<Scalar>);
  if (!std::isfinite(k) || std::abs(cycles - std::round(cycles)) > Scalar(1e-9)) {
    throw ValidationError("plane-wave wavenumber is not commensurate with the box");
  }
  FieldState<Scalar> s = FieldState<Scalar>::zero(grid);
  for (Index i = 0; i < grid.n_points; ++i) {
    s.a[i] = std::cos(k * grid.x(i));
    s.b[i] = std::sin(k * grid.x(i));
  }
  return s;
}

/// Dense Fourier-collocation second-derivative matrix on the periodic grid.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> second_derivative_matrix(
    const GridSpec<Scalar>& grid) {
  const Index n = grid.n_points;
  const Scalar h = Scalar(2) * pi<Scalar> / Scalar(n);
  const Scalar scale = std::pow(Scalar(2) * pi<Scalar> / grid.length(), 2);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d2(n, n);
  const bool even = n % 2 == 0;
  const Scalar diag = even ? -pi<Scalar> * pi<Scalar> / (Scalar(3) * h * h) - Scalar(1) / Scalar(6)
                           : -pi<Scalar> * pi<Scalar> / (Scalar(3) * h * h) + Scalar(1) / Scalar(12);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) {
        d2(i, j) = diag;
        continue;
      }
      const Index offset = i - j;
      const Scalar sign = (offset % 2 == 0) ? Scalar(1) : Scalar(-1);
      const Scalar half = Scalar(offset) * h / Scalar(2);
      const Scalar sn = std::sin(half);
      d2(i, j) = even ? -sign / (Scalar(2) * sn * sn)
                      : -sign * std::cos(half) / (Scalar(2) * sn * sn);
    }
  }
  return scale * d2;
}

template <typename Scalar>
Scalar mode_residual(const VectorX<Scalar>& profile, Scalar energy, const VectorX<Scalar>& v,
                     const GridSpec<Scalar>& grid) {
  const VectorX<Scalar> r =
      -spatial_derivative(profile, grid, 2) + v.cwiseProduct(profile) - energy * profile;
  return std::sqrt(r.squaredNorm() * grid.dx());
}

/// Lowest `count` eigenpairs of (-d^2 + V) phi = E phi, ascending in E.
/// Profiles are normalized and sign-fixed so that the first sample above
/// tolerance is positive. Modes that do not decay inside the box have
/// confined == false.
template <typename Scalar>
std::vector<Mode<Scalar>> eigenmodes(const PotentialSpec<Scalar>& potential,
                                     const GridSpec<Scalar>& grid, Index count) {
  if (count < 1) throw ValidationError("mode count must be at least 1");
  if (count > grid.n_points) {
    throw ValidationError("mode count " + std::to_string(count) + " exceeds grid size " +
                          std::to_string(grid.n_points));
  }
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const VectorX<Scalar> v = sample_potential(potential, grid);
  Matrix h = -second_derivative_matrix(grid);
  h.diagonal() += v;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver did not converge");

  std::vector<Mode<Scalar>> modes;
  modes.reserve(count);
  for (Index j = 0; j < count; ++j) {
    VectorX<Scalar> phi = solver.eigenvectors().col(j);
    phi /= std::sqrt(phi.squaredNorm() * grid.dx());
    const Scalar tol = Scalar(1e-8) * phi.cwiseAbs().maxCoeff();
    for (Index i = 0; i < phi.size(); ++i) {
      if (std::abs(phi[i]) > tol) {
        if (phi[i] < 0) phi = -phi;
        break;
      }
    }
    Mode<Scalar> mode;
    mode.energy = solver.eigenvalues()[j];
    mode.profile = phi;
    mode.grid = grid;
    mode.confined =
        confinement_check(FieldState<Scalar>{grid, phi, VectorX<Scalar>::Zero(grid.n_points), 0},
                          Scalar(kDefaultConfinementThreshold));
    mode.residual = mode_residual(phi, mode.energy, v, grid);
    modes.push_back(std::move(mode));
  }
  return modes;
}

/// A = cos(phase) phi, B = -sin(phase) phi. Evolution advances the phase
/// by E t.
template <typename Scalar>
FieldState<Scalar> stationary_state_from_mode(const Mode<Scalar>& mode, Scalar phase) {
  return {mode.grid, std::cos(phase) * mode.profile, -std::sin(phase) * mode.profile, 0};
}

struct VerifyOptions {
  int samples = 64;
  double dt = 1e-3;
  double stationary_tolerance = 1e-6;
};

namespace detail {

template <typename Scalar>
Scalar fit_slope(const std::vector<Scalar>& t, const std::vector<Scalar>& y) {
  const Scalar n = Scalar(t.size());
  const Scalar tm = std::accumulate(t.begin(), t.end(), Scalar(0)) / n;
  const Scalar ym = std::accumulate(y.begin(), y.end(), Scalar(0)) / n;
  Scalar sxy = 0;
  Scalar sxx = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxy += (t[i] - tm) * (y[i] - ym);
    sxx += (t[i] - tm) * (t[i] - tm);
  }
  return sxy / sxx;
}

}  // namespace detail

/// Evolves the state over `horizon` and measures how far it is from a
/// single stationary solution. The fitted frequency is the averaged slope
/// of the unwrapped angle atan2(-B, A) at the five largest-amplitude
/// samples. Density-ladder and C entries are filled for the free system
/// only; with a potential they stay empty/NaN.
template <typename Scalar>
StationaryReport<Scalar> verify_stationary(const FieldState<Scalar>& state,
                                           const PotentialSpec<Scalar>& potential, Scalar horizon,
                                           const VerifyOptions& options = {}) {
  if (!(horizon > 0)) throw ValidationError("horizon must be positive");
  if (options.samples < 2) throw ValidationError("need at least two time samples");
  const Index n = state.grid.n_points;

  // Pick the sample points by amplitude (stable order for ties).
  const VectorX<Scalar> rho0 = density(state, 0).values;
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index l, Index r) { return rho0[l] > rho0[r]; });
  order.resize(std::min<Index>(5, n));

  // Trajectory.
  std::vector<FieldState<Scalar>> traj;
  std::vector<Scalar> times;
  const Scalar dt_sample = horizon / Scalar(options.samples - 1);
  FieldState<Scalar> s = state;
  for (int j = 0; j < options.samples; ++j) {
    const Scalar t = Scalar(j) * dt_sample;
    if (j > 0) {
      if (potential.is_free()) {
        s = propagate_free_spectral(state, t);
      } else {
        const long sub = std::max(1L, std::lround(double(dt_sample) / options.dt));
        const Scalar h = dt_sample / Scalar(sub);
        for (long k = 0; k < sub; ++k) s = step_split(s, potential, h);
      }
    }
    traj.push_back(s);
    times.push_back(t);
  }

  StationaryReport<Scalar> report;

  Scalar slope_sum = 0;
  for (Index idx : order) {
    std::vector<Scalar> angle;
    Scalar offset = 0;
    Scalar prev = 0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
      const Scalar raw = std::atan2(-traj[j].b[idx], traj[j].a[idx]);
      if (j > 0) {
        const Scalar jump = raw - prev;
        if (jump > pi<Scalar>) offset -= Scalar(2) * pi<Scalar>;
        if (jump < -pi<Scalar>) offset += Scalar(2) * pi<Scalar>;
      }
      prev = raw;
      angle.push_back(raw + offset);
    }
    slope_sum += detail::fit_slope(times, angle);
  }
  const Scalar e = slope_sum / Scalar(order.size());
  report.e_fit = e;

  const auto rec = integrate_invariants(state, 3);
  for (int k = 1; k <= 3; ++k) {
    const Scalar prev = rec.p[k - 1];
    const Scalar scale = std::max<Scalar>(std::abs(rec.p[k]), std::abs(e * prev));
    report.current_ratio_errors.push_back(
        std::abs(prev) > Scalar(1e-12) * std::max<Scalar>(scale, 1)
            ? std::abs(rec.p[k] / prev - e)
            : std::abs(rec.p[k] - e * prev));
  }

  const Scalar rho_scale = std::max<Scalar>(rho0.maxCoeff(), std::numeric_limits<Scalar>::min());
  std::vector<VectorX<Scalar>> currents0;
  for (int k = 0; k <= 3; ++k) {
    currents0.push_back(current(state, k).values);
    report.current_mean.push_back(currents0.back().mean());
    report.current_spread.push_back(0);
  }
  for (const auto& snap : traj) {
    const VectorX<Scalar> rho = density(snap, 0).values;
    report.density_time_variation =
        std::max(report.density_time_variation, (rho - rho0).cwiseAbs().maxCoeff() / rho_scale);
    for (int k = 0; k <= 3; ++k) {
      const VectorX<Scalar> pk = current(snap, k).values;
      report.current_spread[k] = std::max(report.current_spread[k], pk.maxCoeff() - pk.minCoeff());
      if (k == 0) {
        report.current_time_variation = std::max(
            report.current_time_variation, (pk - currents0[0]).cwiseAbs().maxCoeff() / rho_scale);
      }
    }
  }

  if (potential.is_free()) {
    const VectorX<Scalar> m0 = density(state, 0).values;
    const VectorX<Scalar> m1 = density(state, 1).values;
    const VectorX<Scalar> m2 = density(state, 2).values;
    const VectorX<Scalar> m3 = density(state, 3).values;
    const Scalar ladder_scale = std::max<Scalar>(e * e * rho_scale, std::numeric_limits<Scalar>::min());
    report.density_ladder_errors.push_back((m2 - e * e * m0).cwiseAbs().maxCoeff() / ladder_scale);
    report.density_ladder_errors.push_back((m3 - e * e * m1).cwiseAbs().maxCoeff() / ladder_scale);
    if (e != Scalar(0)) {
      // M_1 = E (C - M_0) pointwise
      const VectorX<Scalar> c_samples = m1 / e + m0;
      report.c_fit = c_samples.mean();
      report.c_fit_residual = (c_samples.array() - report.c_fit).abs().maxCoeff();
      report.c_admissible = report.c_fit > m0.maxCoeff();
    }
  }

  const Scalar tol = Scalar(options.stationary_tolerance);
  report.stationary = report.density_time_variation < tol && report.current_time_variation < tol;
  return report;
}

}  // namespace qfield
