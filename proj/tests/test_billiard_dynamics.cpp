#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sympb/billiard_dynamics.hpp"
#include "sympb/errors.hpp"

using namespace sympb;

namespace {

constexpr double kPi = std::numbers::pi;

AffineCurve domain(double a, double b, std::vector<Harmonic> h = {}) {
  ConvexDomainSpec s;
  s.a = a;
  s.b = b;
  s.perturbation = std::move(h);
  return build_domain(s);
}

}  // namespace

TEST_CASE("parallel-tangent antipode") {
  const auto c = domain(1, 1);
  CHECK(tangent_antipode(c, 0.0) == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(tangent_antipode(c, 1.3) == doctest::Approx(1.3 + kPi).epsilon(1e-13));
  const auto e = domain(2, 0.5);
  for (double t : {0.0, 0.4, 2.2}) CHECK(tangent_antipode(e, t) == doctest::Approx(t + kPi).epsilon(1e-12));
}

TEST_CASE("step oracles") {
  const auto c = domain(1, 1);
  const auto n = step(c, PhaseChord::from_gap(0.0, kPi / 4));
  CHECK(n.t0 == doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(n.t1 == doctest::Approx(kPi / 2).epsilon(1e-13));

  const auto e = domain(2, 0.5);
  for (double t : {0.0, 0.7, 3.9})
    for (double eps : {0.01, 0.3, 1.5, kPi - 0.1}) {
      const auto m = step(e, PhaseChord::from_gap(t, eps));
      CHECK(std::abs(m.gap - eps) < 1e-9);
      CHECK(std::abs(m.t0 - (t + eps)) < 1e-14);
    }

  const auto z = step(c, PhaseChord::from_gap(2.0, 0.0));
  CHECK(z.t0 == 2.0);
  CHECK(z.t1 == 2.0);
  CHECK_THROWS_AS(step(c, PhaseChord::from_gap(0.0, 4.0)), InvalidInput);
}

TEST_CASE("generating function oracles") {
  const auto c = domain(1, 1);
  CHECK(generating_function(c, 0.8, 0.8) == 0.0);
  CHECK(generating_function(c, 0.0, kPi / 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(generating_function(c, 0.0, kPi)) < 1e-14);
  CHECK(bounce_residual(c, 0.0, kPi / 4, kPi / 2) < 1e-14);
  CHECK(bounce_residual(c, 0.0, kPi / 4, 0.6 * kPi) > 1e-3);
}

TEST_CASE("step outputs are bounces, reversible, and stay in phase space") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ut(0.0, 6.0), ue(0.005, 2.5);
  const auto c = domain(1.3, 0.8, {{3, 0.02}, {4, -0.01}});
  for (int i = 0; i < 60; ++i) {
    const auto chord = PhaseChord::from_gap(ut(rng), ue(rng));
    if (!in_phase_space(c, chord)) continue;
    const auto n = step(c, chord);
    CHECK(bounce_residual(c, chord.t0, n.t0, n.t1) < 1e-10);
    CHECK(bounce_residual(c, n.t1, n.t0, chord.t0) < 1e-10);
    CHECK(check_variational(c, chord) < 1e-10);
    CHECK(omega(c.derivative(n.t0, 1), c.derivative(n.t1, 1)) > 0.0);
  }
}

TEST_CASE("step commutes with unimodular affine maps") {
  const auto c = domain(1.0, 1.0, {{3, 0.03}});
  Eigen::Matrix2d A;
  A << 1.2, 0.5, 0.1, (1.0 + 0.05) / 1.2;
  const auto F = apply_area_preserving_affine(c, A, Eigen::Vector2d(0.2, -0.4));
  for (double eps : {0.02, 0.4, 1.1}) {
    const auto a = step(c, PhaseChord::from_gap(0.5, eps));
    const auto b = step(F, PhaseChord::from_gap(0.5, eps));
    CHECK((A * c.position(a.t1) + Eigen::Vector2d(0.2, -0.4) - F.position(b.t1)).norm() < 1e-8);
  }
}

TEST_CASE("glancing expansion") {
  // Ellipses: the gap is invariant, so the defect is round-off.
  CHECK(std::abs(lazutkin_defect(domain(2, 0.5), 0.3, 0.1).defect) < 1e-12);
  CHECK(std::abs(lazutkin_defect(domain(1, 1), 1.0, 0.1).defect) < 1e-14);

  const auto c = domain(1, 1, {{3, 0.01}});
  std::vector<double> x, y;
  for (double eps = 1e-3; eps <= 0.1001; eps *= std::pow(10.0, 0.25)) {
    x.push_back(std::log(eps));
    y.push_back(std::log(std::abs(lazutkin_defect(c, 0.3, eps).defect)));
  }
  double sx = 0, sy = 0, sxy = 0, sxx = 0;
  const double n = double(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope > 5.7);
  CHECK(slope < 6.3);

  // The local solve agrees with root finding on the positional bounce equation.
  for (double eps : {0.02, 0.1, 0.19}) {
    const auto g = glancing_increment(c, 0.3 + eps, eps);
    REQUIRE(g.converged);
    const double L = c.perimeter();
    CHECK(std::abs(step(c, PhaseChord::from_gap(0.3, eps)).gap - (eps + g.d)) < 1e-13 * L);
  }
}
