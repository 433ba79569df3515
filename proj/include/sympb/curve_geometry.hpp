#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sympb/periodic_series.hpp"

namespace sympb {

inline constexpr int kDefaultGridSize = 4096;

struct Harmonic {
  int j = 0;
  double delta = 0.0;
};

// Ellipse x^2/a^2 + y^2/b^2 = 1 plus cosine harmonics added to the radius of curvature,
// written in the outward-normal angle phi. Cosines keep the x-axis symmetry.
struct ConvexDomainSpec {
  double a = 1.0;
  double b = 1.0;
  std::vector<Harmonic> perturbation;
  int grid_size = kDefaultGridSize;

  // Throws InvalidInput on non-positive axes, j < 2, duplicate j, or a bad grid.
  void validate() const;
  double delta(int j) const;
  std::string identifier() const;
};

// Closed forms in the normal angle.
double radius_of_curvature_phi(const ConvexDomainSpec& spec, double phi);
Eigen::Vector2d position_phi(const ConvexDomainSpec& spec, double phi);

struct CurveFrame {
  Eigen::Vector2d g, d1, d2, d3;  // gamma and its first three affine derivatives
};

struct FrameResiduals {
  double unimodularity = 0.0;  // max |det(g', g'') - 1|
  double structure = 0.0;      // max |g''' + k g'|
  double speed = 0.0;          // max | |g'| - rho^(1/3) |
  double symmetry = 0.0;       // max |reflect(g(t)) - g(L - t)|, 0 if not tracked
};

// Affine arc-length parametrisation of a strictly convex closed curve, counter-clockwise,
// with gamma(0) on the positive x-axis. Everything is evaluated from trigonometric series.
class AffineCurve {
 public:
  AffineCurve() = default;

  double perimeter() const { return L_; }
  int grid_size() const { return static_cast<int>(t_.size()); }

  Eigen::Vector2d position(double t) const;
  Eigen::Vector2d derivative(double t, int order) const;
  CurveFrame frame(double t) const;
  double rho(double t) const { return rho_(t); }
  double curvature(double t) const { return k_(t); }
  double curvature_derivative(double t, int order = 1) const { return k_.derivative(t, order); }
  // Integral over [0, t] of k - mean(k).
  double curvature_oscillation_integral(double t) const { return k_.oscillating_integral(t); }
  double curvature_mean() const { return k_.mean(); }

  const PeriodicSeries& x_series() const { return x_; }
  const PeriodicSeries& y_series() const { return y_; }
  const PeriodicSeries& rho_series() const { return rho_; }
  const PeriodicSeries& curvature_series() const { return k_; }

  const Eigen::VectorXd& t_table() const { return t_; }
  const Eigen::Matrix2Xd& position_table() const { return pos_; }
  const Eigen::VectorXd& rho_table() const { return rho_tab_; }
  const Eigen::VectorXd& curvature_table() const { return k_tab_; }

  // Marked points O = gamma(0), O' = gamma(L/2).
  Eigen::Vector2d origin() const { return position(0.0); }
  Eigen::Vector2d antipodal_origin() const { return position(0.5 * L_); }

  bool mirror_symmetric() const { return mirror_; }
  const std::optional<ConvexDomainSpec>& source() const { return source_; }
  const FrameResiduals& residuals() const { return residuals_; }

  double enclosed_area() const;

  // Assembles a curve from position series and a radius table; checks all invariants.
  static AffineCurve assemble(PeriodicSeries x, PeriodicSeries y, Eigen::VectorXd rho_table,
                              bool mirror, std::optional<ConvexDomainSpec> source);

 private:
  double L_ = 0.0;
  PeriodicSeries x_, y_, rho_, k_;
  Eigen::VectorXd t_, rho_tab_, k_tab_;
  Eigen::Matrix2Xd pos_;
  bool mirror_ = false;
  std::optional<ConvexDomainSpec> source_;
  FrameResiduals residuals_;
};

AffineCurve build_domain(const ConvexDomainSpec& spec);

struct CurvaturePair {
  double from_radius = 0.0;      // k = rho^(-4/3) - rho''/(3 rho) + (2/9) rho'^2 / rho^2
  double from_derivatives = 0.0; // k = det(g'', g''')
};
CurvaturePair curvature_both_ways(const AffineCurve& curve, double t);

// Returns the radius-based value after checking it against the determinant route.
double affine_curvature(const AffineCurve& curve, double t, double tol = 1e-6);

struct ConicVerdict {
  bool is_ellipse = false;
  double k_E = 0.0;
  double spread = 0.0;  // max |k - mean k|
};
ConicVerdict detect_conic(const AffineCurve& curve, double rel_tol = 1e-8);

// x -> A x + b with det A = 1. Keeps the parametrisation: t is affine-invariant.
AffineCurve apply_area_preserving_affine(const AffineCurve& curve, const Eigen::Matrix2d& A,
                                         const Eigen::Vector2d& b = Eigen::Vector2d::Zero());

struct ReferenceEllipse {
  double L_E = 0.0;
  double k_E = 0.0;
  double delta_hat = 0.0;  // max |k - k_E|
};
ReferenceEllipse fit_reference_ellipse(const AffineCurve& curve);

// Signed area form det(u, v).
inline double omega(const Eigen::Vector2d& u, const Eigen::Vector2d& v) {
  return u.x() * v.y() - u.y() * v.x();
}

}  // namespace sympb
