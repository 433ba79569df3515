#include <doctest.h>

#include <cmath>

#include "sympb/area_spectrum.hpp"
#include "sympb/deformation_lab.hpp"
#include "sympb/orbit_solver.hpp"

using namespace sympb;

namespace {

ConvexDomainSpec spec(double a, double b, std::vector<Harmonic> h = {}) {
  ConvexDomainSpec s;
  s.a = a;
  s.b = b;
  s.perturbation = std::move(h);
  return s;
}

double max_coeff_except(const EvenFourierMap& n, int skip) {
  double m = 0.0;
  for (int p = 0; p <= n.degree(); ++p)
    if (p != skip) m = std::max(m, std::abs(n.coefficient(p)));
  return m;
}

}  // namespace

TEST_CASE("unimodular exponential") {
  Eigen::Matrix2d X;
  X << 0.3, 1.2, -0.7, -0.3;
  for (double tau : {-1.0, 0.25, 2.0}) {
    Eigen::Matrix2d ref = Eigen::Matrix2d::Identity(), term = Eigen::Matrix2d::Identity();
    for (int k = 1; k < 40; ++k) {
      term = term * X * tau / k;
      ref += term;
    }
    const auto E = unimodular_exp(X, tau);
    CHECK((E - ref).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(E.determinant() == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK((unimodular_exp(Eigen::Matrix2d::Zero(), 3.0) - Eigen::Matrix2d::Identity()).norm() == 0.0);
}

TEST_CASE("family validation") {
  auto f = DeformationFamily::harmonic(spec(1, 1), 4);
  CHECK_NOTHROW(f.validate());
  f.tau_min = 0.2;
  CHECK_THROWS_AS(f.validate(), InvalidInput);
  Eigen::Matrix2d X;
  X << 1, 0, 0, 2;  // not traceless
  CHECK_THROWS_AS(DeformationFamily::linear(spec(1, 1), X).validate(), InvalidInput);
  auto g = DeformationFamily::harmonic(spec(1, 1, {{4, 0.01}}), 4, 0.5);
  CHECK(g.spec_at(0.02).perturbation.front().delta == doctest::Approx(0.02));
}

TEST_CASE("fixed-points normalisation pins the axis points") {
  const auto f = DeformationFamily::harmonic(spec(1, 1), 4);
  const auto c0 = family_curve(f, 0.0);
  for (double tau : {-0.05, 0.03, 0.08}) {
    const auto c = family_curve(f, tau);
    CHECK((c.origin() - c0.origin()).norm() < 1e-12);
    CHECK((c.antipodal_origin() - c0.antipodal_origin()).norm() < 1e-12);
  }
}

TEST_CASE("squeeze family gives n = cos(4 pi theta)") {
  const auto m = deformation_map(DeformationFamily::squeeze(spec(1, 1)), 0.0);
  CHECK(m.n.coefficient(2) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(max_coeff_except(m.n, 2) < 1e-8);
  CHECK(m.odd_residual < 1e-10);
  CHECK(m.order == doctest::Approx(2.0).epsilon(0.05));

  const auto iso = isospectral_residuals(DeformationFamily::squeeze(spec(1, 1)), 0.0, 32);
  CHECK(iso.consistent);
  CHECK(iso.n_at_0 == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(iso.n_at_half == doctest::Approx(1.0).epsilon(1e-7));
  for (std::size_t i = 0; i < iso.qs.size(); ++i)
    if (iso.qs[i] >= 3) CHECK(std::abs(iso.xray[i]) < 1e-8);
  CHECK(std::abs(iso.length_change) < 1e-9);
}

TEST_CASE("rotation and constant families are trivial") {
  for (const auto& f : {DeformationFamily::rotation(spec(1, 1)), DeformationFamily::constant(spec(1, 1, {{3, 0.02}}))}) {
    const auto m = deformation_map(f, 0.0);
    CHECK(m.n.coeffs.cwiseAbs().maxCoeff() < 1e-8);
    const auto r = rank_one_check(f);
    CHECK(r.verdict == RankOneVerdict::Rigid);
    CHECK(r.max_distance < 1e-8);
  }
  CHECK(rank_one_check(DeformationFamily::squeeze(spec(1, 1))).verdict == RankOneVerdict::NotApplicable);
  // rotating a non-circular ellipse breaks the axis symmetry: n is odd
  const auto rot = DeformationFamily::rotation(spec(2, 0.5));
  CHECK(deformation_map(rot, 0.0).odd_residual > 0.1);
  CHECK(rank_one_check(rot).verdict == RankOneVerdict::NotApplicable);
  CHECK_FALSE(isospectral_residuals(rot, 0.0, 8).consistent);
  CHECK(to_string(RankOneVerdict::Violated) == "violated");
  CHECK(to_string(RankOneVerdict::Rigid) == "rigid");
  CHECK(to_string(RankOneVerdict::NotApplicable) == "not_applicable");
}

TEST_CASE("harmonic bump: action derivative equals the x-ray transform") {
  const auto f = DeformationFamily::harmonic(spec(1, 1), 4);
  const auto m = deformation_map(f, 0.0);
  CHECK(m.odd_residual < 1e-10);
  CHECK(std::abs(m.n.coefficient(2)) > 0.05);
  CHECK(std::abs(m.L_plus - m.L_minus) < 1e-9 * m.L_plus);
  for (int q : {3, 5, 8, 13}) {
    const auto c = action_derivative_check(f, 0.0, q);
    CHECK(std::abs(c.difference) < 1e-6);
  }
  // the bump at j = 6 changes the spectrum
  const auto iso = isospectral_residuals(DeformationFamily::harmonic(spec(1, 1), 6), 0.0, 16);
  CHECK_FALSE(iso.consistent);
  CHECK(iso.max_xray > 1e-3);
}

TEST_CASE("raw affine families have vanishing x-ray values") {
  Eigen::Matrix2d X;
  X << 0.4, 1.0, 0.3, -0.4;
  const auto f = DeformationFamily::linear(spec(1, 1, {{3, 0.02}}), X);
  const auto iso = isospectral_residuals(f, 0.0, 16);
  CHECK(iso.max_xray < 1e-8);
}

TEST_CASE("boundary distance") {
  const auto a = build_domain(spec(1, 1));
  CHECK(boundary_distance(a, a) < 1e-14);
  ConvexDomainSpec s = spec(1.01, 1.01);
  CHECK(boundary_distance(a, build_domain(s)) == doctest::Approx(0.01).epsilon(1e-6));
}
