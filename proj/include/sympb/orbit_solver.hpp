#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "sympb/curve_geometry.hpp"

namespace sympb {

// Periodic orbit of rotation number 1/q through O = gamma(0), symmetric under t -> L - t.
struct SymmetricOrbit {
  int q = 0;
  Eigen::VectorXd t;     // t_0 = 0 < t_1 < ... < t_{q-1} < L
  double action = 0.0;   // sum_j det(gamma(t_j), gamma(t_{j+1}))
  Eigen::VectorXd gaps;  // eps_j = t_{j+1} - t_j (cyclic)
  double residual = 0.0; // max_j |det(gamma(t_{j+1}) - gamma(t_{j-1}), gamma'(t_j))|
  double gap_constant = 0.0;  // q * max eps_j
  int newton_iterations = 0;
  int gradient_iterations = 0;

  double gap_ratio() const { return gaps.maxCoeff() / gaps.minCoeff(); }
};

struct OrbitOptions {
  int max_newton = 50;
  int max_gradient = 500;
  double gradient_tol = 1e-11;
  // Free coordinates t_1..t_m, m = floor((q-1)/2); defaults to the uniform split.
  std::optional<Eigen::VectorXd> initial;
};

// Exact orbit on an ellipse: t_j = L j / q. Throws InvalidInput unless the curve is an ellipse.
SymmetricOrbit ellipse_orbit(const AffineCurve& curve, int q);

// Maximal-action symmetric orbit by Newton on the reduced action with a gradient fallback.
SymmetricOrbit max_area_orbit(const AffineCurve& curve, int q, const OrbitOptions& opts = {});

// Fills action, gaps and residual from the points.
SymmetricOrbit finalize_orbit(const AffineCurve& curve, int q, Eigen::VectorXd t);

// Leading corrections along orbits as functions of theta = j / q:
//   t_j   = L j/q + a0(j/q)/q^2 + a1(j/q)/q^3 + ...
//   eps_j = L/q + b0(j/q)/q^3 + b1(j/q)/q^4 + ...
struct CorrectionProfiles {
  double a0 = 0.0, b0 = 0.0;
  double a1_literal = 0.0, b1_literal = 0.0;  // forms stated in the source derivation
  double a1 = 0.0, b1 = 0.0;                  // forms consistent with the orbit symmetry
};
CorrectionProfiles correction_profiles(const AffineCurve& curve, double theta);

struct OrbitAsymptotics {
  std::vector<int> qs;                  // e.g. {q, 2q, 4q}
  std::vector<double> a0_sup_residual;  // per q: sup_j |q^2 (t_j - L j/q) - a0(j/q)|
  std::vector<double> b0_sup_residual;  // per q: sup_j |q^3 (eps_j - L/q) - b0(j/q)|
  // Profiles on theta_j = j / qs[0].
  Eigen::VectorXd theta;
  Eigen::VectorXd a0_closed, a0_empirical, a1_empirical, a1_closed, a1_literal;
  Eigen::VectorXd b0_closed, b0_empirical, b1_empirical, b1_closed, b1_literal;
  double a0_derivative_residual = 0.0;            // sup |a0' - b0| on the closed profiles
  double a0_derivative_residual_empirical = 0.0;  // same on the extracted profiles
};

// q-range must be increasing multiples of its first entry; Richardson elimination in 1/q.
OrbitAsymptotics orbit_asymptotics(const AffineCurve& curve, const std::vector<int>& qs);

}  // namespace sympb
