#include "sympb/deformation_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sympb/area_spectrum.hpp"
#include "sympb/orbit_solver.hpp"
#include "sympb/parallel.hpp"
#include "sympb/periodic_series.hpp"

namespace sympb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSamples = 512;
constexpr int kMaxMode = 128;
constexpr double kAxisTol = 1e-10;
constexpr double kLengthMatchTol = 1e-9;

struct Raw {
  std::vector<double> cos, sin;
  double truncation = 0.0;
  double L_minus = 0.0, L_plus = 0.0;
};

Raw sample_map(const DeformationFamily& family, const AffineCurve& mid, double tau, double h) {
  const auto lo = family_curve(family, tau - h);
  const auto hi = family_curve(family, tau + h);
  const double L0 = mid.perimeter(), Lm = lo.perimeter(), Lp = hi.perimeter();
  if (family.normalization == Normalization::FixedPoints && std::abs(Lp - Lm) > kLengthMatchTol * L0) {
    std::ostringstream m;
    m.precision(17);
    m << "deformation map: affine perimeters differ at tau +- h (" << Lm << " vs " << Lp
      << "); fixed-points matching needs equal L";
    throw NormalizationError(m.str());
  }
  std::vector<double> n(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    const double th = double(i) / kSamples;
    const Eigen::Vector2d dtau = (hi.position(th * Lp) - lo.position(th * Lm)) / (2.0 * h);
    n[i] = omega(dtau, mid.derivative(th * L0, 1));
  }
  Raw r;
  trig_coefficients(n, kMaxMode, r.cos, r.sin);
  for (int i = 0; i < kSamples; ++i) {
    const double th = double(i) / kSamples;
    double v = r.cos[0];
    for (int p = 1; p <= kMaxMode; ++p)
      v += r.cos[p] * std::cos(2.0 * kPi * p * th) + r.sin[p] * std::sin(2.0 * kPi * p * th);
    r.truncation = std::max(r.truncation, std::abs(v - n[i]));
  }
  r.L_minus = Lm;
  r.L_plus = Lp;
  return r;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double curve_scale(const AffineCurve& c) { return c.position_table().colwise().norm().maxCoeff(); }

void check_step(const DeformationFamily& f, double tau, double h) {
  if (!(h > 0.0)) throw InvalidInput("deformation: step h must be positive");
  if (tau - h < f.tau_min || tau + h > f.tau_max)
    throw InvalidInput("deformation: tau +- h leaves the parameter interval");
}

double foot_distance(const AffineCurve& c, const Eigen::Vector2d& p) {
  const auto& tab = c.position_table();
  Eigen::Index best = 0;
  (tab.colwise() - p).colwise().squaredNorm().minCoeff(&best);
  double t = c.t_table()[best];
  for (int it = 0; it < 20; ++it) {
    const Eigen::Vector2d r = c.position(t) - p, d1 = c.derivative(t, 1), d2 = c.derivative(t, 2);
    const double f = r.dot(d1), df = d1.squaredNorm() + r.dot(d2);
    if (!(df > 0.0)) break;
    const double dt = f / df;
    t -= dt;
    if (std::abs(dt) < 1e-15 * c.perimeter()) break;
  }
  return (c.position(t) - p).norm();
}

}  // namespace

void DeformationFamily::validate() const {
  base.validate();
  if (!(tau_min < 0.0 && tau_max > 0.0)) throw InvalidInput("family: parameter interval must contain 0");
  for (size_t i = 0; i < path.size(); ++i) {
    if (path[i].j < 2) throw InvalidInput("family: harmonic index must be >= 2");
    if (!std::isfinite(path[i].delta_dot)) throw InvalidInput("family: non-finite delta_dot");
    for (size_t k = 0; k < i; ++k)
      if (path[k].j == path[i].j) throw InvalidInput("family: duplicate harmonic in path");
  }
  if (affine) {
    if (!affine->allFinite()) throw InvalidInput("family: non-finite affine generator");
    if (std::abs(affine->trace()) > 1e-12 * std::max(1.0, affine->cwiseAbs().maxCoeff()))
      throw InvalidInput("family: affine generator must be traceless");
  }
}

ConvexDomainSpec DeformationFamily::spec_at(double tau) const {
  ConvexDomainSpec s = base;
  for (const auto& r : path) {
    auto it = std::find_if(s.perturbation.begin(), s.perturbation.end(),
                           [&](const Harmonic& h) { return h.j == r.j; });
    if (it == s.perturbation.end())
      s.perturbation.push_back({r.j, tau * r.delta_dot});
    else
      it->delta += tau * r.delta_dot;
  }
  return s;
}

DeformationFamily DeformationFamily::constant(const ConvexDomainSpec& base) {
  DeformationFamily f;
  f.base = base;
  return f;
}

DeformationFamily DeformationFamily::harmonic(const ConvexDomainSpec& base, int j, double rate,
                                              Normalization mode) {
  DeformationFamily f;
  f.base = base;
  f.path = {{j, rate}};
  f.normalization = mode;
  return f;
}

DeformationFamily DeformationFamily::linear(const ConvexDomainSpec& base, const Eigen::Matrix2d& X,
                                            Normalization mode) {
  DeformationFamily f;
  f.base = base;
  f.affine = X;
  f.normalization = mode;
  return f;
}

DeformationFamily DeformationFamily::squeeze(const ConvexDomainSpec& base) {
  return linear(base, Eigen::Vector2d(1.0, -1.0).asDiagonal().toDenseMatrix());
}

DeformationFamily DeformationFamily::rotation(const ConvexDomainSpec& base) {
  Eigen::Matrix2d X;
  X << 0.0, -1.0, 1.0, 0.0;
  return linear(base, X);
}

Eigen::Matrix2d unimodular_exp(const Eigen::Matrix2d& X, double tau) {
  // X^2 = -det(X) I for traceless X.
  const double d = -X.determinant();
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  if (d > 0.0) {
    const double w = std::sqrt(d);
    return std::cosh(tau * w) * I + (std::sinh(tau * w) / w) * X;
  }
  if (d < 0.0) {
    const double w = std::sqrt(-d);
    return std::cos(tau * w) * I + (std::sin(tau * w) / w) * X;
  }
  return I + tau * X;
}

AffineCurve family_curve(const DeformationFamily& family, double tau) {
  AffineCurve c = build_domain(family.spec_at(tau));
  if (family.affine && tau != 0.0) c = apply_area_preserving_affine(c, unimodular_exp(*family.affine, tau));
  if (family.normalization == Normalization::Raw) return c;

  const Eigen::Vector2d O = position_phi(family.base, 0.0), Op = position_phi(family.base, kPi);
  const Eigen::Vector2d P = c.origin(), Pp = c.antipodal_origin();
  const double scale = curve_scale(c);
  if (std::abs(P.y()) > kAxisTol * scale || std::abs(Pp.y()) > kAxisTol * scale)
    throw NormalizationError("fixed-points normalization: gamma(0) or gamma(L/2) is off the axis at tau = " +
                             std::to_string(tau));
  const double s = (O.x() - Op.x()) / (P.x() - Pp.x());
  if (!(s > 0.0) || !std::isfinite(s)) throw NormalizationError("fixed-points normalization: degenerate axis");
  const Eigen::Matrix2d A = Eigen::Vector2d(s, 1.0 / s).asDiagonal();
  if (s == 1.0 && P == O) return c;
  return apply_area_preserving_affine(c, A, O - A * P);
}

DeformationMap deformation_map(const DeformationFamily& family, double tau, double h) {
  family.validate();
  check_step(family, tau, h);
  const auto mid = family_curve(family, tau);
  // Three step sizes fit inside [tau - h, tau + h].
  Raw r[3];
  parallel_for(3, [&](int i) { r[i] = sample_map(family, mid, tau, h / double(1 << i)); });

  DeformationMap out;
  out.tau = tau;
  out.h = h;
  out.L_minus = r[0].L_minus;
  out.L_plus = r[0].L_plus;
  out.truncation = r[0].truncation;
  for (double v : r[0].sin) out.odd_residual = std::max(out.odd_residual, std::abs(v));

  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * curve_scale(mid) / (0.25 * h);
  const double e1 = sup_diff(r[0].cos, r[1].cos), e2 = sup_diff(r[1].cos, r[2].cos);
  out.richardson_change = e1;
  out.order = e2 > floor ? std::log2(e1 / e2) : std::numeric_limits<double>::quiet_NaN();

  int deg = kMaxMode;
  while (deg > 0 && std::abs(r[0].cos[deg]) <= floor) --deg;
  Eigen::VectorXd c(deg + 1);
  for (int p = 0; p <= deg; ++p) c[p] = std::abs(r[0].cos[p]) <= floor ? 0.0 : r[0].cos[p];
  out.n = EvenFourierMap(std::move(c));
  return out;
}

std::vector<ActionDerivativeCheck> action_derivative_checks(const DeformationFamily& family, double tau,
                                                           const std::vector<int>& qs, double h) {
  family.validate();
  check_step(family, tau, h);
  for (int q : qs)
    if (q < 3) throw InvalidInput("action derivative check: q must be >= 3");
  const auto mid = family_curve(family, tau);
  const auto lo = family_curve(family, tau - h), hi = family_curve(family, tau + h);
  const auto n = deformation_map(family, tau, h).n;
  std::vector<ActionDerivativeCheck> out(qs.size());
  parallel_for(int(qs.size()), [&](int i) {
    const int q = qs[i];
    const auto orbit = max_area_orbit(mid, q);
    auto frozen_action = [&](const AffineCurve& c) {
      const double s = c.perimeter() / mid.perimeter();
      double a = 0.0;
      for (int j = 0; j < q; ++j)
        a += omega(c.position(s * orbit.t[j]), c.position(s * orbit.t[(j + 1) % q]));
      return a;
    };
    auto& r = out[i];
    r.q = q;
    r.finite_difference = (frozen_action(hi) - frozen_action(lo)) / (2.0 * h);
    r.xray = xray_transform(mid, orbit, n);
    r.difference = std::abs(r.finite_difference - r.xray);
  });
  return out;
}

ActionDerivativeCheck action_derivative_check(const DeformationFamily& family, double tau, int q,
                                              double h) {
  return action_derivative_checks(family, tau, {q}, h).front();
}

IsospectralReport isospectral_residuals(const DeformationFamily& family, double tau, int q_max, double h) {
  if (q_max < 3) throw InvalidInput("isospectral residuals: q_max must be >= 3");
  const auto dm = deformation_map(family, tau, h);
  const auto curve = family_curve(family, tau);
  const double L0 = family_curve(family, 0.0).perimeter();
  const CorrectionQuadrature quad(curve);

  IsospectralReport r;
  r.tau = tau;
  r.n_hat0 = dm.n.coefficient(0);
  r.odd_residual = dm.odd_residual;
  r.alpha1 = quad.alpha1(dm.n);
  r.alpha2 = quad.alpha2(dm.n);
  r.length_change = curve.perimeter() - L0;
  r.n_at_0 = dm.n(0.0);
  r.n_at_half = dm.n(0.5);
  for (int q = 3; q <= q_max; ++q) r.qs.push_back(q);
  r.xray.resize(r.qs.size());
  parallel_for(int(r.qs.size()), [&](int i) {
    r.xray[i] = xray_transform(curve, max_area_orbit(curve, r.qs[i]), dm.n);
  });
  for (double v : r.xray) r.max_xray = std::max(r.max_xray, std::abs(v));
  r.consistent = r.odd_residual <= kIsospectralXrayTol && std::abs(r.n_hat0) <= kIsospectralXrayTol && std::abs(r.alpha1) <= kIsospectralXrayTol &&
                 std::abs(r.alpha2) <= kIsospectralXrayTol && r.max_xray <= kIsospectralXrayTol &&
                 std::abs(r.length_change) <= kIsospectralLengthTol;
  return r;
}

std::string to_string(RankOneVerdict v) {
  switch (v) {
    case RankOneVerdict::NotApplicable: return "not_applicable";
    case RankOneVerdict::Rigid: return "rigid";
    case RankOneVerdict::Violated: return "violated";
  }
  return "unknown";
}

double boundary_distance(const AffineCurve& a, const AffineCurve& b, int samples) {
  if (samples < 8) throw InvalidInput("boundary distance: too few samples");
  double d = 0.0;
  for (int i = 0; i < samples; ++i) {
    d = std::max(d, foot_distance(b, a.position(a.perimeter() * i / samples)));
    d = std::max(d, foot_distance(a, b.position(b.perimeter() * i / samples)));
  }
  return d;
}

RankOneReport rank_one_check(const DeformationFamily& family, int samples, double n_tol, double distance_tol) {
  family.validate();
  if (samples < 1) throw InvalidInput("rank-one check: need at least one sample");
  RankOneReport r;
  const double width = family.tau_max - family.tau_min;
  const double h = std::min(kDefaultDeformationStep, 0.25 * width / (samples + 1));
  for (int k = 0; k < samples; ++k) r.taus.push_back(family.tau_min + width * (k + 1) / (samples + 1));
  std::vector<double> nsup(samples), dist(samples);
  const auto base = family_curve(family, 0.0);
  parallel_for(samples, [&](int k) {
    const auto m = deformation_map(family, r.taus[k], h);
    nsup[k] = m.n.coeffs.cwiseAbs().sum() + m.odd_residual;  // odd part: the family left the symmetric class
    dist[k] = boundary_distance(family_curve(family, r.taus[k]), base);
  });
  r.max_n = *std::max_element(nsup.begin(), nsup.end());
  r.max_distance = *std::max_element(dist.begin(), dist.end());
  if (r.max_n > n_tol)
    r.verdict = RankOneVerdict::NotApplicable;
  else
    r.verdict = r.max_distance <= distance_tol ? RankOneVerdict::Rigid : RankOneVerdict::Violated;
  return r;
}

}  // namespace sympb
