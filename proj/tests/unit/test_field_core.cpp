#include <doctest.h>

#include <random>

#include "qfield/invariants.hpp"
#include "support/oracles.hpp"

using namespace qfield;
using namespace qfield::testing;

namespace {

FieldState<double> plane_wave(const GridSpec<double>& g, double k) {
  auto s = FieldState<double>::zero(g);
  for (Index i = 0; i < g.n_points; ++i) {
    s.a[i] = std::cos(k * g.x(i));
    s.b[i] = std::sin(k * g.x(i));
  }
  return s;
}

}  // namespace

TEST_CASE("make_grid spacing and validation") {
  CHECK(make_grid(-40.0, 40.0, 1024).dx() == 0.078125);
  CHECK(make_grid(0.0, 2 * kPi, 64).dx() == doctest::Approx(2 * kPi / 64).epsilon(1e-15));
  CHECK_THROWS_AS(make_grid(1.0, 1.0, 64), ValidationError);
  CHECK_THROWS_AS(make_grid(2.0, 1.0, 64), ValidationError);
  CHECK_THROWS_AS(make_grid(0.0, 1.0, 7), ValidationError);

  const auto g = make_grid(0.0, 8.0, 8);
  CHECK(g.x(3) == 3.0);
  const auto k = g.wavenumbers();
  CHECK(k[4] == doctest::Approx(-4 * 2 * kPi / 8));  // Nyquist sits at -n/2
  CHECK(k[7] == doctest::Approx(-2 * kPi / 8));
}

TEST_CASE("spectral derivative is exact for band-limited input") {
  const auto g = make_grid(0.0, 2 * kPi, 64);
  for (int k : {1, 3, 7}) {
    VectorX<double> f(64), expect(64);
    for (Index i = 0; i < 64; ++i) {
      f[i] = std::sin(k * g.x(i));
      expect[i] = k * std::cos(k * g.x(i));
    }
    CHECK(max_abs_diff(spatial_derivative(f, g, 1), expect) < 1e-12 * k);
  }
  const VectorX<double> c = VectorX<double>::Constant(64, 2.5);
  for (int order = 1; order <= 6; ++order) {
    CHECK(spatial_derivative(c, g, order).cwiseAbs().maxCoeff() < 1e-13);
  }
  for (int order = 1; order <= 4; ++order) {
    CHECK(spatial_derivative(c, g, order, DerivativeMethod::finite_difference).cwiseAbs().maxCoeff() <
          1e-12);
  }
  CHECK_THROWS_AS(spatial_derivative(c, g, 5, DerivativeMethod::finite_difference), ValidationError);
  CHECK_THROWS_AS(spatial_derivative(c, g, -1), ValidationError);
}

TEST_CASE("high spectral derivatives are not swamped by transform roundoff") {
  const auto g = make_grid(-40.0, 40.0, 1024);
  VectorX<double> f(g.n_points), d4(g.n_points), d6(g.n_points);
  for (Index i = 0; i < g.n_points; ++i) {
    const double x = g.x(i), x2 = x * x, e = std::exp(-x2);
    f[i] = e;
    d4[i] = (16 * x2 * x2 - 48 * x2 + 12) * e;
    d6[i] = (64 * x2 * x2 * x2 - 480 * x2 * x2 + 720 * x2 - 120) * e;
  }
  CHECK(max_abs_diff(spatial_derivative(f, g, 4), d4) < 1e-10);
  CHECK(max_abs_diff(spatial_derivative(f, g, 6), d6) < 1e-9);
  const auto ladder = derivative_ladder(f, g, 6);
  CHECK(max_abs_diff(ladder[4], d4) < 1e-10);
  CHECK(max_abs_diff(ladder[6], spatial_derivative(f, g, 6)) == 0.0);
}

TEST_CASE("finite-difference second derivative converges at second order") {
  std::vector<double> h, err;
  for (Index n : {256, 512, 1024}) {
    const auto g = make_grid(-40.0, 40.0, n);
    VectorX<double> f(n);
    for (Index i = 0; i < n; ++i) f[i] = std::exp(-g.x(i) * g.x(i));
    h.push_back(g.dx());
    err.push_back(max_abs_diff(spatial_derivative(f, g, 2, DerivativeMethod::finite_difference),
                               spatial_derivative(f, g, 2)));
  }
  CHECK(convergence_order(h, err) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("density profiles") {
  const auto g = make_grid(0.0, 2 * kPi, 64);
  const auto rho = density(plane_wave(g, 1), 0);
  CHECK((rho.values.array() - 1.0).abs().maxCoeff() < 1e-15);
  CHECK(rho.kind == ProfileKind::density);

  const auto zero = FieldState<double>::zero(g);
  for (int n = 0; n <= 3; ++n) CHECK(density(zero, n).values.cwiseAbs().maxCoeff() == 0.0);

  // \int (phi')^2 for phi = pi^{-1/4} e^{-x^2/2}
  const double expected = gauss_legendre(
      [](double x) {
        const double d = -x * std::pow(kPi, -0.25) * std::exp(-x * x / 2);
        return d * d;
      },
      -40, 40);
  const auto big = make_grid(-40.0, 40.0, 1024);
  CHECK(integrate(density(gaussian_packet(big, 0, 1, 0), 1)) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("current profiles") {
  const auto g = make_grid(0.0, 2 * kPi, 64);
  const auto p = current(plane_wave(g, 3), 0);
  CHECK((p.values.array() - 3.0).abs().maxCoeff() < 1e-12);
  CHECK(p.kind == ProfileKind::current);

  auto real_only = plane_wave(g, 2);
  real_only.b.setZero();
  CHECK(current(real_only, 0).values.cwiseAbs().maxCoeff() == 0.0);

  // P_0 density equals k phi^2 for the packet phi e^{ikx}
  const double expected = gauss_legendre(
      [](double x) { return 3.0 * std::exp(-x * x) / std::sqrt(kPi); }, -40, 40);
  const auto big = make_grid(-40.0, 40.0, 1024);
  CHECK(integrate(current(gaussian_packet(big, 0, 1, 3), 0)) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("integrate_invariants") {
  const auto big = make_grid(-40.0, 40.0, 1024);
  const auto rec = integrate_invariants(gaussian_packet(big, 0, 1, 0), 3);
  const double m0_oracle =
      gauss_legendre([](double x) { return std::exp(-x * x) / std::sqrt(kPi); }, -40, 40);
  CHECK(std::abs(rec.m[0] - m0_oracle) < 1e-12);
  CHECK(rec.m.size() == 4);
  CHECK(rec.energy == rec.m[1]);
  CHECK(rec.confined);

  // One period of the plane wave: M_n = k^{2n} L, P_n = k^{2n+1} L.
  const double k = 2.0;
  const auto g = make_grid(0.0, 2 * kPi, 64);
  const auto pw = integrate_invariants(plane_wave(g, k), 3);
  for (int n = 0; n <= 3; ++n) {
    const double mn = gauss_legendre([&](double) { return std::pow(k, 2 * n); }, 0, 2 * kPi, 16);
    const double pn = gauss_legendre([&](double) { return std::pow(k, 2 * n + 1); }, 0, 2 * kPi, 16);
    CHECK(pw.m[n] == doctest::Approx(mn).epsilon(1e-12));
    CHECK(pw.p[n] == doctest::Approx(pn).epsilon(1e-12));
  }
  CHECK_FALSE(pw.confined);

  const auto zero = integrate_invariants(FieldState<double>::zero(g), 2);
  for (int n = 0; n <= 2; ++n) {
    CHECK(zero.m[n] == 0.0);
    CHECK(zero.p[n] == 0.0);
  }
  CHECK(std::isnan(zero.center));
  CHECK_THROWS_AS(integrate_invariants(FieldState<double>::zero(g), 0), ValidationError);
}

TEST_CASE("integration by parts reproduces the density/current integrals") {
  const auto g = make_grid(-40.0, 40.0, 1024);
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_confined_state(g, rng, trial % 2 == 0);
    const auto direct = integrate_invariants(s, 3);
    const auto parts = integrate_invariants_by_parts(s, 3);
    for (int n = 0; n <= 3; ++n) {
      CHECK(rel_diff(parts.m[n], direct.m[n]) < 1e-9);
      // P_n can pass through zero; scale by M_n which bounds it.
      CHECK(std::abs(parts.p[n] - direct.p[n]) < 1e-9 * std::max(direct.m[n], std::abs(direct.p[n])));
    }
  }
  const auto pg = make_grid(0.0, 2 * kPi, 64);
  const auto pw = plane_wave(pg, 3);
  CHECK(rel_diff(integrate_invariants_by_parts(pw, 1).m[1], integrate_invariants(pw, 1).m[1]) < 1e-10);
  const auto zero = integrate_invariants_by_parts(FieldState<double>::zero(pg), 2);
  for (double v : zero.m) CHECK(v == 0.0);
  for (double v : zero.p) CHECK(v == 0.0);
}

TEST_CASE("continuity residual") {
  SUBCASE("spectral derivatives, well-resolved states") {
    for (Index n : {512, 1024}) {
      const auto g = make_grid(-40.0, 40.0, n);
      std::mt19937_64 rng(n);
      for (int trial = 0; trial < 10; ++trial) {
        const auto s = random_confined_state(g, rng);
        for (int order = 0; order <= 3; ++order) {
          CHECK(continuity_residual(s, order).values.cwiseAbs().maxCoeff() < 1e-10);
        }
      }
    }
    const auto fast = gaussian_packet(make_grid(-40.0, 40.0, 1024), 0.3, 1, 3);
    for (int order = 0; order <= 3; ++order) {
      CHECK(continuity_residual(fast, order).values.cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("plane waves and zero field") {
    const auto g = make_grid(0.0, 2 * kPi, 64);
    for (int n = 0; n <= 3; ++n) {
      CHECK(continuity_residual(plane_wave(g, 2), n).values.cwiseAbs().maxCoeff() < 1e-10);
      CHECK(continuity_residual(FieldState<double>::zero(g), n).values.cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("potential terms cancel in the zeroth-order law") {
    const auto g = make_grid(-40.0, 40.0, 1024);
    VectorX<double> v(g.n_points);
    for (Index i = 0; i < g.n_points; ++i) v[i] = g.x(i) * g.x(i);
    const auto s = gaussian_packet(g, 1.0, 1, 1.5);
    CHECK(continuity_residual(s, 0, v).values.cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("finite differences converge at second order") {
    std::vector<double> h, err;
    for (Index n : {512, 1024, 2048}) {
      const auto g = make_grid(-40.0, 40.0, n);
      const auto r = continuity_residual(gaussian_packet(g, 0, 1, 1), 0,
                                         DerivativeMethod::finite_difference);
      h.push_back(g.dx());
      err.push_back(std::sqrt(r.values.squaredNorm() * g.dx()));
    }
    CHECK(convergence_order(h, err) == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("center of the localization distribution") {
  const auto g = make_grid(-40.0, 40.0, 1024);
  CHECK(std::abs(center(gaussian_packet(g, 2.5, 1, 0)) - 2.5) < 1e-10);
  CHECK(std::abs(center(gaussian_packet(g, 0, 1.3, 0))) < 1e-12);

  auto pair = gaussian_packet(g, -3, 1, 0);
  pair.a += gaussian_packet(g, 3, 1, 0).a;
  CHECK(std::abs(center(pair)) < 1e-12);

  // Unnormalized states give the same center.
  auto scaled = gaussian_packet(g, 2.5, 1, 0);
  scaled.a *= 7.0;
  CHECK(std::abs(center(scaled) - 2.5) < 1e-10);

  CHECK_THROWS_AS(center(plane_wave(make_grid(0.0, 2 * kPi, 64), 1)), ValidationError);
  CHECK_THROWS_AS(center(FieldState<double>::zero(g)), ValidationError);
}

TEST_CASE("normalize") {
  const auto g = make_grid(-40.0, 40.0, 1024);
  auto s = FieldState<double>::zero(g);
  for (Index i = 0; i < g.n_points; ++i) s.a[i] = std::exp(-g.x(i) * g.x(i));
  const double m0_oracle = gauss_legendre([](double x) { return std::exp(-2 * x * x); }, -40, 40);
  CHECK(m0_oracle == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-13));
  CHECK(integrate(density(s, 0)) == doctest::Approx(m0_oracle).epsilon(1e-12));

  const auto once = normalize(s);
  CHECK(std::abs(integrate(density(once, 0)) - 1.0) < 1e-14);
  CHECK(max_abs_diff(normalize(once), once) < 1e-14);
  CHECK_THROWS_AS(normalize(FieldState<double>::zero(g)), ValidationError);

  std::mt19937_64 rng(5);
  const auto r = random_confined_state(g, rng, false);
  const auto rn = normalize(r);
  for (Index i = 0; i < g.n_points; i += 37) {
    if (std::abs(r.b[i]) > 1e-6) CHECK(rn.a[i] / rn.b[i] == doctest::Approx(r.a[i] / r.b[i]));
  }
}

TEST_CASE("confinement check") {
  const auto g = make_grid(-40.0, 40.0, 1024);
  CHECK(confinement_check(gaussian_packet(g, 0, 1, 0), 1e-12));
  CHECK_FALSE(confinement_check(plane_wave(make_grid(0.0, 2 * kPi, 64), 1), 1e-12));
  CHECK(confinement_check(FieldState<double>::zero(g), 1e-12));
  CHECK_THROWS_AS(confinement_check(FieldState<double>::zero(g), 0.0), ValidationError);
}

TEST_CASE("property: densities are non-negative and M1 M0 >= P0^2") {
  const auto g = make_grid(-40.0, 40.0, 1024);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_confined_state(g, rng, trial % 3 != 0);
    for (int n = 0; n <= 3; ++n) CHECK(density(s, n).values.minCoeff() >= 0.0);
    const auto rec = integrate_invariants(s, 1);
    CHECK(rec.m[1] * rec.m[0] - rec.p[0] * rec.p[0] >= -1e-12);
  }
}
