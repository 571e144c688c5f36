#include <doctest.h>

#include <random>

#include "qfield/dynamics.hpp"
#include "qfield/transforms.hpp"
#include "support/oracles.hpp"

using namespace qfield;
using namespace qfield::testing;

namespace {

const GridSpec<double> kBox = make_grid(-40.0, 40.0, 1024);

double profile_diff(const DensityProfile<double>& a, const DensityProfile<double>& b) {
  return max_abs_diff(a.values, b.values);
}

}  // namespace

TEST_CASE("phase_rotate") {
  std::mt19937_64 rng(11);
  const auto s = random_confined_state(kBox, rng);

  SUBCASE("identity and quarter turns") {
    CHECK(max_abs_diff(phase_rotate(s, RotationParams<double>{1, 0}), s) == 0.0);
    const RotationParams<double> quarter{0, 1};
    const auto twice = phase_rotate(phase_rotate(s, quarter), quarter);
    CHECK(max_abs_diff(twice.a, (-s.a).eval()) == 0.0);
    CHECK(max_abs_diff(twice.b, (-s.b).eval()) == 0.0);
    CHECK(twice.time == s.time);
  }

  SUBCASE("unit rotation leaves every profile invariant") {
    const auto rot = RotationParams<double>::from_angle(0.731);
    CHECK(rot.unit_modulus());
    const auto r = phase_rotate(s, rot);
    for (int n = 0; n <= 3; ++n) {
      const double dscale = density(s, n).values.cwiseAbs().maxCoeff();
      const double cscale = current(s, n).values.cwiseAbs().maxCoeff();
      CHECK(profile_diff(density(r, n), density(s, n)) < 1e-12 * std::max(1.0, dscale));
      CHECK(profile_diff(current(r, n), current(s, n)) < 1e-12 * std::max(1.0, cscale));
    }
  }

  SUBCASE("(3,4) scales by exactly 25") {
    const RotationParams<double> big{3, 4};
    CHECK_FALSE(big.unit_modulus());
    CHECK(big.scale() == 25.0);
    const auto r = phase_rotate(s, big);
    const auto before = integrate_invariants(s, 3);
    const auto after = integrate_invariants(r, 3);
    for (int n = 0; n <= 3; ++n) {
      CHECK(rel_diff(after.m[n], 25 * before.m[n]) < 1e-12);
      CHECK(std::abs(after.p[n] - 25 * before.p[n]) < 1e-12 * 25 * before.m[n]);
      const VectorX<double> d0 = 25 * density(s, n).values;
      CHECK(max_abs_diff(density(r, n).values, d0) < 1e-12 * d0.cwiseAbs().maxCoeff());
    }
  }

  CHECK_THROWS_AS(phase_rotate(s, RotationParams<double>{std::nan(""), 0}), ValidationError);
}

TEST_CASE("translate") {
  const auto s = gaussian_packet(kBox, 0, 1, 1.5);
  CHECK(max_abs_diff(translate(s, 0.0), s) == 0.0);
  CHECK(max_abs_diff(translate(s, kBox.length()), s) < 1e-12);
  CHECK(std::abs(center(translate(s, 3.0)) - 3.0) < 1e-10);

  // Fractional shifts match the closed-form packet.
  const double shift = 0.3 * kBox.dx() + 1.7;
  auto expect = FieldState<double>::zero(kBox);
  const auto moved = gaussian_packet(kBox, shift, 1, 1.5);
  // Carrier moves with the envelope: phi(x - d) e^{ik(x - d)}.
  const double c = std::cos(1.5 * shift), sn = std::sin(1.5 * shift);
  expect.a = c * moved.a + sn * moved.b;
  expect.b = c * moved.b - sn * moved.a;
  CHECK(max_abs_diff(translate(s, shift), expect) < 1e-12);

  const auto before = integrate_invariants(s, 3);
  const auto after = integrate_invariants(translate(s, shift), 3);
  for (int n = 0; n <= 3; ++n) {
    CHECK(rel_diff(after.m[n], before.m[n]) < 1e-12);
    CHECK(rel_diff(after.p[n], before.p[n]) < 1e-12);
  }
  CHECK_THROWS_AS(translate(s, std::numeric_limits<double>::infinity()), ValidationError);
}

TEST_CASE("translate commutes with free evolution") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_confined_state(kBox, rng);
    const double d = 2.37 * (trial + 1) - 5;
    const auto one = propagate_free_spectral(translate(s, d), 0.8);
    const auto two = translate(propagate_free_spectral(s, 0.8), d);
    CHECK(max_abs_diff(one, two) < 1e-9);
  }
}

TEST_CASE("boost") {
  const auto rest = gaussian_packet(kBox, 0, 1, 0);

  SUBCASE("v = 0 is the identity") { CHECK(max_abs_diff(boost(rest, BoostParams<double>{0}), rest) == 0.0); }

  SUBCASE("rest packet gains momentum v/2") {
    const auto b = boost(rest, BoostParams<double>{1.0});
    CHECK(std::abs(integrate_invariants(b, 1).p[0] - 0.5) < 1e-8);
  }

  SUBCASE("moving packet follows u -> u + v") {
    // P0 = u/2, M1 = u^2/4 + 1/2 for a sigma=1 packet with carrier u/2.
    const double u = 1.0, v = 1.5;
    const auto s = gaussian_packet(kBox, 0, 1, u / 2);
    const auto rec = integrate_invariants(s, 1);
    CHECK(rec.p[0] == doctest::Approx(u / 2).epsilon(1e-12));
    const auto after = integrate_invariants(boost(s, BoostParams<double>{v}), 1);
    CHECK(std::abs(after.p[0] - (u + v) / 2) < 1e-8);
    CHECK(std::abs(after.m[1] - ((u + v) * (u + v) / 4 + 0.5)) < 1e-8);
  }

  SUBCASE("boost at nonzero time shifts the density by v t") {
    auto s = propagate_free_spectral(gaussian_packet(kBox, -1, 1, 0.5), 0.7);
    const double v = 2.0;
    const auto b = boost(s, BoostParams<double>{v});
    const auto shifted = translate(s, v * s.time);
    CHECK(profile_diff(density(b, 0), density(shifted, 0)) < 1e-8);
  }

  SUBCASE("non-confined states are rejected") {
    const auto g = make_grid(0.0, 2 * kPi, 64);
    auto pw = FieldState<double>::zero(g);
    pw.a.setOnes();
    CHECK_THROWS_AS(boost(pw, BoostParams<double>{1}), ValidationError);
    CHECK_THROWS_AS(boost(rest, BoostParams<double>{std::nan("")}), ValidationError);
  }
}

TEST_CASE("boosted fields satisfy the free equations of motion") {
  // Boosting the analytic trajectory at each time must give a trajectory
  // that solves the field equations: compare its central time difference
  // with the right-hand side.
  const auto s0 = gaussian_packet(kBox, 0, 1.2, 0.4);
  const double v = 1.3, t = 0.6, h = 1e-3;
  auto at = [&](double time) {
    auto s = propagate_free_spectral(s0, time);
    return boost(s, BoostParams<double>{v});
  };
  const auto mid = at(t);
  const auto fwd = at(t + h), bwd = at(t - h);
  const VectorX<double> dadt = (fwd.a - bwd.a) / (2 * h);
  const VectorX<double> dbdt = (fwd.b - bwd.b) / (2 * h);
  const VectorX<double> rhs_a = -spatial_derivative(mid.b, kBox, 2);
  const VectorX<double> rhs_b = spatial_derivative(mid.a, kBox, 2);
  // Central differences leave an O(h^2) truncation term.
  CHECK(max_abs_diff(dadt, rhs_a) < 1e-5);
  CHECK(max_abs_diff(dbdt, rhs_b) < 1e-5);

  // Exactly: boost-then-evolve equals evolve-then-boost.
  auto start = s0;
  const auto boosted_then_evolved = propagate_free_spectral(boost(start, BoostParams<double>{v}), t);
  auto evolved = propagate_free_spectral(s0, t);
  const auto evolved_then_boosted = boost(evolved, BoostParams<double>{v});
  CHECK(max_abs_diff(boosted_then_evolved, evolved_then_boosted) < 1e-8);
}

TEST_CASE("predict_boosted_invariants") {
  DiagnosticsRecord<double> rec;
  rec.m = {1.0, 0.5, 0.75};
  rec.p = {0.0, 0.0, 0.0};
  rec.center = 0.0;
  rec.time = 0.0;

  const auto two = predict_boosted_invariants(rec, 2.0);
  CHECK(two.p[0] == 1.0);
  CHECK(two.m[1] == 1.5);
  CHECK(two.m[0] == 1.0);
  CHECK(std::isnan(two.m[2]));
  CHECK(std::isnan(two.p[1]));

  const auto same = predict_boosted_invariants(rec, 0.0);
  CHECK(same.m == rec.m);
  CHECK(same.p == rec.p);

  rec.p[0] = 0.5;
  rec.m[1] = 0.25;
  const auto one = predict_boosted_invariants(rec, 1.0);
  CHECK(one.p[0] == 1.0);
  CHECK(one.m[1] == 1.0);

  rec.m[0] = 2.0;
  CHECK_THROWS_AS(predict_boosted_invariants(rec, 1.0), ValidationError);
}

TEST_CASE("property: boost agrees with predicted invariants") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    auto s = random_confined_state(kBox, rng);
    s.time = 0.1 * trial;
    const double v = -2.0 + 0.4 * trial;
    const auto predicted = predict_boosted_invariants(integrate_invariants(s, 1), v);
    const auto measured = integrate_invariants(boost(s, BoostParams<double>{v}), 1);
    CHECK(std::abs(measured.p[0] - predicted.p[0]) < 1e-8);
    CHECK(std::abs(measured.m[1] - predicted.m[1]) < 1e-8);
    CHECK(std::abs(measured.center - predicted.center) < 1e-8);
  }
}

TEST_CASE("phase_aligned_distance treats unit rotations as equivalent") {
  std::mt19937_64 rng(8);
  const auto s = random_confined_state(kBox, rng);
  CHECK(phase_aligned_distance(s, phase_rotate(s, RotationParams<double>::from_angle(2.1))) < 1e-14);
  CHECK(phase_aligned_distance(s, translate(s, 1.0)) > 1e-3);
}
