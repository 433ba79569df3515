#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sympb/area_spectrum.hpp"
#include "sympb/errors.hpp"
#include "sympb/orbit_solver.hpp"
#include "sympb/rigidity_operator.hpp"

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

TEST_CASE("circle spectrum and fit") {
  const auto c = domain(1, 1);
  const auto tab = spectrum_table(c, 128);
  CHECK(tab.row(2).action == doctest::Approx(0.0));
  for (int q = 3; q <= 128; q += 5)
    CHECK(std::abs(tab.row(q).action - q * std::sin(2 * kPi / q)) < 1e-10);
  for (int q = 3; q < 128; ++q) CHECK(tab.row(q + 1).action > tab.row(q).action);

  const auto fit = fit_asymptotics(tab, 16, 128);
  CHECK(fit.c0 == doctest::Approx(2 * kPi).epsilon(1e-8));
  CHECK(fit.c1 == doctest::Approx(-4 * std::pow(kPi, 3) / 3).epsilon(1e-5));
  CHECK(fit.c2 == doctest::Approx(4 * std::pow(kPi, 5) / 15).epsilon(1e-3));
  CHECK(fit.kappa == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.a1_paper == doctest::Approx(fit.a1_formula).epsilon(1e-5));
  CHECK(fit.a2_paper == doctest::Approx(fit.a2_formula).epsilon(1e-3));
  CHECK(fit.c0 == doctest::Approx(fit.twice_area).epsilon(1e-6));
  CHECK(convention_constant() == doctest::Approx(-2.0));
}

TEST_CASE("fit rejects narrow ranges") {
  const auto tab = spectrum_table(domain(1, 1), 40);
  CHECK_THROWS_AS(fit_asymptotics(tab, 16, 40), InvalidInput);
  CHECK_THROWS_AS(fit_asymptotics(tab, 2, 40), InvalidInput);
  CHECK_THROWS_AS(tab.row(41), InvalidInput);
  CHECK_THROWS_AS(spectrum_table(domain(1, 1), 2), InvalidInput);
}

TEST_CASE("spectrum is affine invariant") {
  const auto circle = spectrum_table(domain(1, 1), 48);
  const auto ellipse = spectrum_table(domain(2, 0.5), 48);
  Eigen::Matrix2d A;
  A << 1.5, 0.7, 0.2, (1 + 0.7 * 0.2) / 1.5;
  const auto pert = domain(1, 1, {{4, 0.01}});
  const auto pert_tab = spectrum_table(pert, 32);
  const auto moved = spectrum_table(apply_area_preserving_affine(pert, A, {0.3, -2.0}), 32);
  for (int q = 2; q <= 48; ++q) CHECK(std::abs(circle.row(q).action - ellipse.row(q).action) < 1e-9);
  for (int q = 2; q <= 32; ++q) CHECK(std::abs(pert_tab.row(q).action - moved.row(q).action) < 1e-9);

  const auto fe = fit_asymptotics(ellipse, 12, 48);
  const auto fc = fit_asymptotics(circle, 12, 48);
  CHECK(fe.c0 == doctest::Approx(fc.c0).epsilon(1e-9));
  CHECK(fe.c1 == doctest::Approx(fc.c1).epsilon(1e-7));
  const auto fp = fit_asymptotics(pert_tab, 8, 32);
  CHECK(fp.c0 == doctest::Approx(fp.twice_area).epsilon(1e-6));
}

TEST_CASE("x-ray transform oracles") {
  const auto c = domain(1, 1);
  const auto one = EvenFourierMap::mode(0, 4);
  const auto p2 = EvenFourierMap::mode(2, 4);
  for (int q : {3, 5, 8, 17}) {
    const auto o = ellipse_orbit(c, q);
    CHECK(xray_transform(c, o, one) == doctest::Approx(2 * q * std::sin(2 * kPi / q)).epsilon(1e-12));
    CHECK(std::abs(xray_transform(c, o, p2)) < 1e-12);
  }
  CHECK(xray_transform(c, max_area_orbit(c, 2), one) == doctest::Approx(0.0));

  // the identity a_E,q(n) = mu_q [n]_q on an eccentric ellipse
  const auto e = domain(2, 0.5);
  for (int p : {0, 1, 3}) {
    const auto n = EvenFourierMap::mode(p, 8);
    for (int q = 3; q <= 64; q += 7) {
      const auto o = ellipse_orbit(e, q);
      const double expect = ellipse_multiplier(1.0, q) * cyclic_sum(n, q).value;
      CHECK(std::abs(xray_transform(e, o, n) - expect) < 1e-8 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("chord weights") {
  const auto c = domain(1, 1);
  const auto w4 = chord_weights(c, ellipse_orbit(c, 4));
  for (int j = 0; j < 4; ++j) CHECK(w4[j] == doctest::Approx(2.0).epsilon(1e-12));
  const auto e = domain(2, 0.5);
  const auto w8 = chord_weights(e, ellipse_orbit(e, 8));
  for (int j = 0; j < 8; ++j) CHECK(w8[j] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  // On a near-circle the symmetric model (c2 = 0) is accurate to O(q^-4), the literal c2 is not.
  const auto d = domain(1, 1, {{4, 0.01}});
  double prev = 0.0;
  for (int q : {16, 32, 64}) {
    const auto prof = chord_weight_profile(d, q);
    CHECK(prof.residual < prof.residual_literal);
    CHECK(prof.residual < prof.residual_leading);
    if (prev > 0) CHECK(std::log2(prev / prof.residual) > 3.5);
    prev = prof.residual;
  }
  const auto cc = chord_coefficients(d, 0.3);
  CHECK(cc.c2 == 0.0);
  CHECK(cc.c2_literal != 0.0);
}

TEST_CASE("correction functionals") {
  for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    const auto e = domain(a, b);
    for (int p : {0, 1, 3}) {
      const auto f = correction_functionals(e, EvenFourierMap::mode(p, 6));
      CHECK(std::abs(f.lambda) < 1e-10);
      CHECK(std::abs(f.alpha1) < 1e-6);
      CHECK(std::abs(f.alpha2) < 1e-5);
    }
  }
  const auto d = domain(1, 1, {{3, 0.01}});
  const CorrectionQuadrature quad(d);
  CHECK(std::abs(quad.lambda()) < 1e-10);
  CHECK(quad.alpha2_symmetric(EvenFourierMap::mode(1, 2)) == 0.0);

  // the derivative terms drop for constants
  const auto f1 = correction_functionals(d, EvenFourierMap::mode(0, 0));
  CHECK(std::isfinite(f1.alpha1));
  CHECK(std::abs(f1.alpha1 - quad.alpha1(EvenFourierMap::mode(0, 0))) < 1e-14);

  // mode 3 on a delta_3 perturbation: alpha1 against the extracted 1/q^2 coefficient
  const auto n = EvenFourierMap::mode(3, 4);
  const double a1 = quad.alpha1(n);
  CHECK(std::abs(a1) > 1e-4);
  const DomainXray xr(d, 128);
  auto excess = [&](int q) {
    return q * q * (xr.xray(q, n) - ellipse_multiplier(quad.k_E(), q) * cyclic_sum(n, q).value);
  };
  const double r64 = excess(64), r128 = excess(128);
  const double extrap = 2 * r128 - r64;  // remove the 1/q tail
  CHECK(extrap == doctest::Approx(a1).epsilon(0.05));
}

TEST_CASE("ellipse multiplier") {
  CHECK(ellipse_multiplier(1.0, 3) == doctest::Approx(6 * std::sin(2 * kPi / 3)));
  CHECK(ellipse_multiplier(4.0, 6) == doctest::Approx(6 * std::sin(kPi / 3)));
}
