#include "sympb/curve_geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "sympb/errors.hpp"

namespace sympb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kUnimodularTol = 1e-8;
constexpr double kStructureTol = 1e-6;
constexpr double kSpeedTol = 1e-8;
constexpr double kSymmetryTol = 1e-8;
constexpr double kCurvatureRouteTol = 1e-6;

double support_ellipse(double a, double b, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return std::sqrt(a * a * c * c + b * b * s * s);
}

double curvature_from_radius(const std::array<double, 3>& r) {
  return std::pow(r[0], -4.0 / 3.0) - r[2] / (3.0 * r[0]) + (2.0 / 9.0) * r[1] * r[1] / (r[0] * r[0]);
}

}  // namespace

void ConvexDomainSpec::validate() const {
  if (!(std::isfinite(a) && a > 0.0) || !(std::isfinite(b) && b > 0.0))
    throw InvalidInput("domain: semi-axes must be positive and finite");
  if (grid_size < 32 || grid_size > (1 << 22) || grid_size % 2 != 0)
    throw InvalidInput("domain: grid_size must be even and in [32, 2^22]");
  std::set<int> seen;
  for (const auto& h : perturbation) {
    if (h.j < 2) throw InvalidInput("domain: harmonic index j must be >= 2");
    if (!std::isfinite(h.delta)) throw InvalidInput("domain: harmonic amplitude must be finite");
    if (!seen.insert(h.j).second) throw InvalidInput("domain: duplicate harmonic j");
  }
}

double ConvexDomainSpec::delta(int j) const {
  for (const auto& h : perturbation)
    if (h.j == j) return h.delta;
  return 0.0;
}

std::string ConvexDomainSpec::identifier() const {
  std::ostringstream os;
  os.precision(17);
  os << "ellipse(" << a << "," << b << ")";
  for (const auto& h : perturbation) os << "+d" << h.j << "=" << h.delta;
  return os.str();
}

double radius_of_curvature_phi(const ConvexDomainSpec& spec, double phi) {
  const double h = support_ellipse(spec.a, spec.b, phi);
  double r = spec.a * spec.a * spec.b * spec.b / (h * h * h);
  for (const auto& p : spec.perturbation) r += p.delta * std::cos(p.j * phi);
  return r;
}

Eigen::Vector2d position_phi(const ConvexDomainSpec& spec, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  double h = support_ellipse(spec.a, spec.b, phi);
  double dh = (spec.b * spec.b - spec.a * spec.a) * s * c / h;
  for (const auto& p : spec.perturbation) {
    const double w = p.delta / (1.0 - double(p.j) * p.j);
    h += w * std::cos(p.j * phi);
    dh -= w * p.j * std::sin(p.j * phi);
  }
  return {h * c - dh * s, h * s + dh * c};
}

Eigen::Vector2d AffineCurve::position(double t) const { return {x_(t), y_(t)}; }

Eigen::Vector2d AffineCurve::derivative(double t, int order) const {
  return {x_.derivative(t, order), y_.derivative(t, order)};
}

CurveFrame AffineCurve::frame(double t) const {
  std::array<double, 4> xs{}, ys{};
  x_.derivatives(t, xs);
  y_.derivatives(t, ys);
  return {{xs[0], ys[0]}, {xs[1], ys[1]}, {xs[2], ys[2]}, {xs[3], ys[3]}};
}

double AffineCurve::enclosed_area() const {
  const int M = grid_size();
  double s = 0.0;
  for (int i = 0; i < M; ++i) {
    const auto f = frame(t_[i]);
    s += omega(f.g, f.d1);
  }
  return 0.5 * s * L_ / M;
}

AffineCurve AffineCurve::assemble(PeriodicSeries x, PeriodicSeries y, Eigen::VectorXd rho_table,
                                  bool mirror, std::optional<ConvexDomainSpec> source) {
  if (!x.resolved() || !y.resolved())
    throw ConsistencyError("curve: grid too coarse to resolve the boundary series");
  AffineCurve c;
  c.L_ = x.period();
  const int M = static_cast<int>(rho_table.size());
  c.x_ = std::move(x);
  c.y_ = std::move(y);
  c.mirror_ = mirror;
  c.source_ = std::move(source);
  c.t_.resize(M);
  c.pos_.resize(2, M);
  for (int i = 0; i < M; ++i) c.t_[i] = c.L_ * i / M;
  c.rho_tab_ = std::move(rho_table);
  c.rho_ = PeriodicSeries::from_samples({c.rho_tab_.data(), size_t(M)}, c.L_);
  if (!c.rho_.resolved()) throw ConsistencyError("curve: grid too coarse to resolve rho");

  c.k_tab_.resize(M);
  std::vector<CurveFrame> frames(M);
  for (int i = 0; i < M; ++i) {
    std::array<double, 3> r{};
    c.rho_.derivatives(c.t_[i], r);
    c.k_tab_[i] = curvature_from_radius(r);
    frames[i] = c.frame(c.t_[i]);
    c.pos_.col(i) = frames[i].g;
    const double k_det = omega(frames[i].d2, frames[i].d3);
    if (std::abs(k_det - c.k_tab_[i]) > kCurvatureRouteTol * std::max(1.0, std::abs(c.k_tab_[i])))
      throw ConsistencyError("curve: curvature routes disagree at t = " + std::to_string(c.t_[i]));
  }
  c.k_ = PeriodicSeries::from_samples({c.k_tab_.data(), size_t(M)}, c.L_);

  FrameResiduals& res = c.residuals_;
  for (int i = 0; i < M; ++i) {
    const auto& f = frames[i];
    res.unimodularity = std::max(res.unimodularity, std::abs(omega(f.d1, f.d2) - 1.0));
    res.structure = std::max(res.structure, (f.d3 + c.k_tab_[i] * f.d1).norm());
    res.speed = std::max(res.speed, std::abs(f.d1.norm() - std::cbrt(c.rho_tab_[i])));
    if (mirror) {
      const Eigen::Vector2d mirrored = c.position(c.L_ - c.t_[i]);
      res.symmetry = std::max(res.symmetry, (mirrored - Eigen::Vector2d(f.g.x(), -f.g.y())).norm());
    }
  }
  if (res.unimodularity > kUnimodularTol)
    throw ConsistencyError("curve: det(g', g'') deviates from 1 by " + std::to_string(res.unimodularity));
  if (res.structure > kStructureTol)
    throw ConsistencyError("curve: g''' + k g' residual " + std::to_string(res.structure));
  if (res.speed > kSpeedTol * std::max(1.0, std::cbrt(c.rho_tab_.maxCoeff())))
    throw ConsistencyError("curve: |g'| differs from rho^(1/3)");
  if (res.symmetry > kSymmetryTol) throw ConsistencyError("curve: mirror symmetry lost");
  return c;
}

AffineCurve build_domain(const ConvexDomainSpec& spec) {
  spec.validate();
  const int M = spec.grid_size;

  // Strict convexity on a grid finer than the working one.
  for (int i = 0; i < 4 * M; ++i) {
    const double phi = 2.0 * kPi * i / (4.0 * M);
    const double r = radius_of_curvature_phi(spec, phi);
    if (!(r > 0.0)) {
      std::ostringstream os;
      os << "domain is not strictly convex: rho(phi = " << phi << ") = " << r;
      throw InvalidInput(os.str());
    }
  }

  // dt/dphi = rho^(2/3).
  std::vector<double> g(M), phis(M + 1);
  for (int i = 0; i < M; ++i) {
    phis[i] = 2.0 * kPi * i / M;
    g[i] = std::pow(radius_of_curvature_phi(spec, phis[i]), 2.0 / 3.0);
  }
  phis[M] = 2.0 * kPi;
  const auto gs = PeriodicSeries::from_samples(g, 2.0 * kPi);
  if (!gs.resolved()) throw ConsistencyError("domain: grid too coarse to resolve rho^(2/3)");
  const double L = 2.0 * kPi * gs.mean();
  auto t_of = [&](double phi) { return gs.mean() * phi + gs.oscillating_integral(phi); };

  std::vector<double> tk(M + 1);
  for (int i = 0; i <= M; ++i) tk[i] = t_of(phis[i]);
  tk[0] = 0.0;
  tk[M] = L;

  std::vector<double> xs(M), ys(M);
  Eigen::VectorXd rho(M);
  for (int i = 0; i < M; ++i) {
    const double target = L * i / M;
    auto it = std::upper_bound(tk.begin(), tk.end(), target);
    const int k = std::clamp(int(it - tk.begin()) - 1, 0, M - 1);
    double lo = phis[k], hi = phis[k + 1];
    double phi = lo + (target - tk[k]) / (tk[k + 1] - tk[k]) * (hi - lo);
    for (int iter = 0; iter < 60; ++iter) {
      const double f = t_of(phi) - target;
      if (f == 0.0) break;
      if (f > 0) hi = phi; else lo = phi;
      double next = phi - f / gs(phi);
      if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
      const bool done = std::abs(next - phi) < 1e-16 * (1.0 + std::abs(phi));
      phi = next;
      if (done) break;
    }
    if (i == 0) phi = 0.0;
    const auto p = position_phi(spec, phi);
    xs[i] = p.x();
    ys[i] = p.y();
    rho[i] = radius_of_curvature_phi(spec, phi);
  }
  auto x = PeriodicSeries::from_samples(xs, L);
  auto y = PeriodicSeries::from_samples(ys, L);
  return AffineCurve::assemble(std::move(x), std::move(y), std::move(rho), true, spec);
}

CurvaturePair curvature_both_ways(const AffineCurve& curve, double t) {
  std::array<double, 3> r{};
  curve.rho_series().derivatives(t, r);
  const auto f = curve.frame(t);
  return {curvature_from_radius(r), omega(f.d2, f.d3)};
}

double affine_curvature(const AffineCurve& curve, double t, double tol) {
  const auto k = curvature_both_ways(curve, t);
  if (std::abs(k.from_radius - k.from_derivatives) > tol * std::max(1.0, std::abs(k.from_radius)))
    throw NumericalError("affine_curvature: the two evaluation routes disagree");
  return k.from_radius;
}

ConicVerdict detect_conic(const AffineCurve& curve, double rel_tol) {
  const auto& k = curve.curvature_table();
  ConicVerdict v;
  const double mean = k.mean();
  v.spread = (k.array() - mean).abs().maxCoeff();
  v.is_ellipse = mean > 0.0 && v.spread <= rel_tol * mean;
  v.k_E = v.is_ellipse ? mean : 0.0;
  return v;
}

AffineCurve apply_area_preserving_affine(const AffineCurve& curve, const Eigen::Matrix2d& A,
                                         const Eigen::Vector2d& b) {
  if (!A.allFinite() || std::abs(A.determinant() - 1.0) > 1e-12)
    throw InvalidInput("affine map must have determinant 1");
  auto x = PeriodicSeries::combine(A(0, 0), curve.x_series(), A(0, 1), curve.y_series(), b.x());
  auto y = PeriodicSeries::combine(A(1, 0), curve.x_series(), A(1, 1), curve.y_series(), b.y());
  const int M = curve.grid_size();
  Eigen::VectorXd rho(M);
  for (int i = 0; i < M; ++i) {
    const double s = (A * curve.derivative(curve.t_table()[i], 1)).norm();
    rho[i] = s * s * s;
  }
  const bool mirror = curve.mirror_symmetric() && A(0, 1) == 0.0 && A(1, 0) == 0.0 && b.y() == 0.0;
  return AffineCurve::assemble(std::move(x), std::move(y), std::move(rho), mirror, std::nullopt);
}

ReferenceEllipse fit_reference_ellipse(const AffineCurve& curve) {
  ReferenceEllipse e;
  e.L_E = curve.perimeter();
  e.k_E = std::pow(2.0 * kPi / e.L_E, 2);
  e.delta_hat = (curve.curvature_table().array() - e.k_E).abs().maxCoeff();
  return e;
}

}  // namespace sympb
