#pragma once

// Test-only reference computations. None of this touches the library's
// derivative or quadrature code.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "qfield/field_state.hpp"

namespace qfield::testing {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Composite 5-point Gauss-Legendre quadrature of f on [lo, hi].
inline double gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                             int panels = 4000) {
  static const double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                  -0.9061798459386640, 0.9061798459386640};
  static const double weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                    0.2369268850561891, 0.2369268850561891};
  const double h = (hi - lo) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (int q = 0; q < 5; ++q) sum += weights[q] * f(mid + 0.5 * h * nodes[q]);
  }
  return 0.5 * h * sum;
}

struct LineFit {
  double slope = 0;
  double intercept = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double xm = 0, ym = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - xm) * (y[i] - ym);
    sxx += (x[i] - xm) * (x[i] - xm);
  }
  return {sxy / sxx, ym - sxy / sxx * xm};
}

/// Least-squares slope of log(err) against log(h).
inline double convergence_order(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> lh, le;
  for (std::size_t i = 0; i < h.size(); ++i) {
    lh.push_back(std::log(h[i]));
    le.push_back(std::log(err[i]));
  }
  return fit_line(lh, le).slope;
}

/// Normalized Gaussian packet pi^{-1/4} sigma^{-1/2} exp(-(x-x0)^2/(2 sigma^2))
/// with carrier e^{ikx}, evaluated directly from the closed form.
inline FieldState<double> gaussian_packet(const GridSpec<double>& grid, double x0, double sigma,
                                          double k) {
  auto s = FieldState<double>::zero(grid);
  const double norm = std::pow(kPi, -0.25) / std::sqrt(sigma);
  for (Index i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    const double env = norm * std::exp(-(x - x0) * (x - x0) / (2 * sigma * sigma));
    s.a[i] = env * std::cos(k * x);
    s.b[i] = env * std::sin(k * x);
  }
  return s;
}

/// Superposition of 1-3 random Gaussian packets, confined well inside a
/// box of half-width >= 20 and band-limited for n >= 512 on [-40, 40].
inline FieldState<double> random_confined_state(const GridSpec<double>& grid, std::mt19937_64& rng,
                                                bool normalized = true) {
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_real_distribution<double> center(-5, 5), width(0.7, 2.0), carrier(-3, 3),
      phase(0, 2 * kPi), amp(0.3, 1.5);
  auto s = FieldState<double>::zero(grid);
  const int packets = count(rng);
  for (int j = 0; j < packets; ++j) {
    const double x0 = center(rng), sg = width(rng), k = carrier(rng), ph = phase(rng), a = amp(rng);
    for (Index i = 0; i < grid.n_points; ++i) {
      const double x = grid.x(i);
      const double env = a * std::exp(-(x - x0) * (x - x0) / (2 * sg * sg));
      s.a[i] += env * std::cos(k * x + ph);
      s.b[i] += env * std::sin(k * x + ph);
    }
  }
  if (normalized) {
    const double m0 = (s.a.array().square() + s.b.array().square()).sum() * grid.dx();
    s.a /= std::sqrt(m0);
    s.b /= std::sqrt(m0);
  }
  return s;
}

inline double max_abs_diff(const VectorX<double>& x, const VectorX<double>& y) {
  return (x - y).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const FieldState<double>& x, const FieldState<double>& y) {
  return std::max(max_abs_diff(x.a, y.a), max_abs_diff(x.b, y.b));
}

inline double rel_diff(double x, double y) {
  return std::abs(x - y) / std::max(std::abs(y), 1e-300);
}

}  // namespace qfield::testing
