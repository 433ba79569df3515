#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sympb/curve_geometry.hpp"
#include "sympb/errors.hpp"

using namespace sympb;

namespace {

constexpr double kPi = std::numbers::pi;

ConvexDomainSpec ellipse(double a, double b, std::vector<Harmonic> h = {}, int grid = kDefaultGridSize) {
  ConvexDomainSpec s;
  s.a = a;
  s.b = b;
  s.perturbation = std::move(h);
  s.grid_size = grid;
  return s;
}

// Small random perturbations of random ellipses, well inside the convex range.
ConvexDomainSpec random_domain(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> axis(0.6, 1.6), amp(-0.02, 0.02);
  std::uniform_int_distribution<int> harmonic(2, 7), count(0, 3);
  ConvexDomainSpec s = ellipse(1.0, 1.0);
  s.a = axis(rng);
  s.b = std::clamp(s.a * axis(rng), 0.7 * s.a, 1.3 * s.a);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    const int j = harmonic(rng);
    if (s.delta(j) == 0.0) s.perturbation.push_back({j, amp(rng) * std::min(s.a, s.b)});
  }
  return s;
}

}  // namespace

TEST_CASE("affine perimeter oracles") {
  CHECK(build_domain(ellipse(1, 1)).perimeter() == doctest::Approx(2 * kPi).epsilon(1e-13));
  CHECK(build_domain(ellipse(2, 0.5)).perimeter() == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(build_domain(ellipse(4, 1)).perimeter() == doctest::Approx(2 * kPi * std::cbrt(4.0)).epsilon(1e-12));
}

TEST_CASE("affine curvature oracles") {
  const auto unit = build_domain(ellipse(1, 1));
  const auto big = build_domain(ellipse(8, 8));
  const auto e = build_domain(ellipse(2, 0.5));
  for (double th : {0.0, 0.1, 0.45, 0.77}) {
    CHECK(affine_curvature(unit, th * unit.perimeter()) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(affine_curvature(big, th * big.perimeter()) == doctest::Approx(0.0625).epsilon(1e-10));
    CHECK(affine_curvature(e, th * e.perimeter()) == doctest::Approx(1.0).epsilon(1e-8));
    const auto both = curvature_both_ways(e, th * e.perimeter());
    CHECK(std::abs(both.from_radius - both.from_derivatives) < 1e-6);
  }
}

TEST_CASE("conic detection") {
  CHECK(detect_conic(build_domain(ellipse(2, 0.5))).is_ellipse);
  CHECK(detect_conic(build_domain(ellipse(2, 0.5))).k_E == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(detect_conic(build_domain(ellipse(1, 1))).is_ellipse);
  CHECK_FALSE(detect_conic(build_domain(ellipse(1, 1, {{3, 0.05}}))).is_ellipse);
}

TEST_CASE("area-preserving affine maps keep the parametrisation") {
  const auto circle = build_domain(ellipse(1, 1));
  const auto id = apply_area_preserving_affine(circle, Eigen::Matrix2d::Identity());
  CHECK((id.position_table() - circle.position_table()).cwiseAbs().maxCoeff() < 1e-14);

  const auto image = apply_area_preserving_affine(circle, Eigen::Vector2d(2.0, 0.5).asDiagonal().toDenseMatrix());
  const auto direct = build_domain(ellipse(2, 0.5));
  CHECK(image.perimeter() == doctest::Approx(2 * kPi).epsilon(1e-12));
  for (double t : {0.0, 0.9, 2.5, 4.0}) CHECK((image.position(t) - direct.position(t)).norm() < 1e-10);

  const double tau = 0.3;
  const auto e = build_domain(ellipse(1.5, 0.8));
  const auto sq = apply_area_preserving_affine(e, Eigen::Vector2d(std::exp(tau), std::exp(-tau)).asDiagonal().toDenseMatrix());
  const auto ref = build_domain(ellipse(1.5 * std::exp(tau), 0.8 * std::exp(-tau)));
  CHECK(sq.perimeter() == doctest::Approx(ref.perimeter()).epsilon(1e-10));
  CHECK(detect_conic(sq).k_E == doctest::Approx(detect_conic(e).k_E).epsilon(1e-8));

  Eigen::Matrix2d bad;
  bad << 2, 0, 0, 1;
  CHECK_THROWS_AS(apply_area_preserving_affine(circle, bad), InvalidInput);
}

TEST_CASE("reference ellipse") {
  const auto r = fit_reference_ellipse(build_domain(ellipse(2, 0.5)));
  CHECK(r.k_E == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.L_E == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(r.delta_hat < 1e-8);
  const auto c = build_domain(ellipse(1, 1, {{4, 0.01}}));
  const auto p = fit_reference_ellipse(c);
  CHECK(p.k_E == doctest::Approx(std::pow(2 * kPi / c.perimeter(), 2)).epsilon(1e-15));
  CHECK(p.delta_hat > 1e-3);
  CHECK(p.delta_hat < 0.2);
}

TEST_CASE("spec validation and convexity rejection") {
  CHECK_THROWS_AS(build_domain(ellipse(-1, 1)), InvalidInput);
  CHECK_THROWS_AS(build_domain(ellipse(1, 1, {{1, 0.1}})), InvalidInput);
  CHECK_THROWS_AS(build_domain(ellipse(1, 1, {{3, 0.1}, {3, 0.2}})), InvalidInput);
  CHECK_THROWS_AS(build_domain(ellipse(1, 1, {}, 31)), InvalidInput);
  try {
    build_domain(ellipse(1, 1, {{3, 2.0}}));
    FAIL("non-convex spec accepted");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("phi") != std::string::npos);
  }
}

TEST_CASE("coarse grids are rejected instead of returning inaccurate geometry") {
  CHECK_THROWS_AS(build_domain(ellipse(2, 0.5, {}, 64)), ConsistencyError);
  CHECK_NOTHROW(build_domain(ellipse(1, 1, {}, 64)));
}

TEST_CASE("frame invariants on random domains") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    const auto spec = random_domain(rng);
    CAPTURE(spec.identifier());
    const auto c = build_domain(spec);
    const auto& r = c.residuals();
    CHECK(r.unimodularity < 1e-8);
    CHECK(r.structure < 1e-6);
    CHECK(r.speed < 1e-8);
    CHECK(r.symmetry < 1e-8);
    const double L = c.perimeter();
    for (double th : {0.13, 0.5, 0.81}) {
      const auto f = c.frame(th * L);
      CHECK(std::abs(omega(f.d1, f.d2) - 1.0) < 1e-8);
      CHECK((f.d3 + c.curvature(th * L) * f.d1).norm() < 1e-6);
      CHECK(std::abs(f.d1.norm() - std::cbrt(c.rho(th * L))) < 1e-8);
      const Eigen::Vector2d g = c.position(L - th * L);
      CHECK(std::abs(g.x() - f.g.x()) < 1e-8);
      CHECK(std::abs(g.y() + f.g.y()) < 1e-8);
    }
    CHECK(std::abs(c.origin().y()) < 1e-12);
    CHECK(std::abs(c.antipodal_origin().y()) < 1e-10);
  }
}

TEST_CASE("affine perimeter converges under grid doubling and is affine invariant") {
  const auto s = ellipse(1.2, 0.9, {{3, 0.01}, {5, -0.004}});
  auto s2 = s;
  s2.grid_size = 2 * s.grid_size;
  const double L = build_domain(s).perimeter();
  CHECK(std::abs(build_domain(s2).perimeter() - L) < 1e-10 * L);
  Eigen::Matrix2d A;
  A << 1.0, 0.7, 0.0, 1.0;  // shear
  CHECK(std::abs(apply_area_preserving_affine(build_domain(s), A, Eigen::Vector2d(0.3, -1.0)).perimeter() - L) < 1e-10 * L);
}
