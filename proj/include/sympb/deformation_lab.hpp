#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sympb/curve_geometry.hpp"
#include "sympb/errors.hpp"
#include "sympb/fourier_maps.hpp"

namespace sympb {

// Matched parametrisations could not be formed (axis points off the axis, or L differs
// between neighbouring curves in fixed-points mode).
class NormalizationError : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

struct HarmonicRate {
  int j = 0;
  double delta_dot = 0.0;
};

enum class Normalization { FixedPoints, Raw };

// Omega_tau = exp(tau X) applied to the spec with delta_j(tau) = delta_j + tau * delta_dot_j,
// optionally renormalised so that gamma(tau, 0) = O and gamma(tau, L/2) = O' of Omega_0.
struct DeformationFamily {
  ConvexDomainSpec base;
  std::vector<HarmonicRate> path;
  std::optional<Eigen::Matrix2d> affine;  // traceless generator X
  Normalization normalization = Normalization::FixedPoints;
  double tau_min = -0.1, tau_max = 0.1;

  void validate() const;
  ConvexDomainSpec spec_at(double tau) const;

  static DeformationFamily constant(const ConvexDomainSpec& base);
  static DeformationFamily harmonic(const ConvexDomainSpec& base, int j, double rate = 1.0,
                                    Normalization mode = Normalization::FixedPoints);
  static DeformationFamily linear(const ConvexDomainSpec& base, const Eigen::Matrix2d& X,
                                  Normalization mode = Normalization::Raw);
  static DeformationFamily squeeze(const ConvexDomainSpec& base);   // X = diag(1, -1)
  static DeformationFamily rotation(const ConvexDomainSpec& base);  // X = [[0,-1],[1,0]]
};

// exp(tau X) for traceless 2x2 X, in closed form.
Eigen::Matrix2d unimodular_exp(const Eigen::Matrix2d& X, double tau);

// Omega_tau, normalised per the family mode.
AffineCurve family_curve(const DeformationFamily& family, double tau);

struct DeformationMap {
  double tau = 0.0;
  double h = 0.0;
  EvenFourierMap n;             // cosine coefficients in theta = t / L
  double odd_residual = 0.0;    // max sine coefficient
  double truncation = 0.0;      // max |samples - projection|
  double richardson_change = 0.0;  // sup |c(h) - c(h/2)|
  double order = 0.0;           // log2 of successive changes over 2h, h, h/2; NaN at round-off
  double L_minus = 0.0, L_plus = 0.0;
};

inline constexpr double kDefaultDeformationStep = 1e-4;

// n(theta) = omega(d_tau gamma, d_t gamma) at t = theta L, by central differences.
DeformationMap deformation_map(const DeformationFamily& family, double tau,
                               double h = kDefaultDeformationStep);

struct ActionDerivativeCheck {
  int q = 0;
  double finite_difference = 0.0;
  double xray = 0.0;
  double difference = 0.0;
};
// The orbit is solved at tau and its parameters theta_j = t_j / L frozen at tau +- h.
ActionDerivativeCheck action_derivative_check(const DeformationFamily& family, double tau, int q,
                                              double h = kDefaultDeformationStep);
// Same, sharing the curves at tau and tau +- h across all q.
std::vector<ActionDerivativeCheck> action_derivative_checks(const DeformationFamily& family, double tau,
                                                           const std::vector<int>& qs,
                                                           double h = kDefaultDeformationStep);

inline constexpr double kIsospectralXrayTol = 1e-7;
inline constexpr double kIsospectralLengthTol = 1e-9;

struct IsospectralReport {
  double tau = 0.0;
  double n_hat0 = 0.0;
  double odd_residual = 0.0;  // nonzero when Omega_tau loses the axis symmetry
  double alpha1 = 0.0, alpha2 = 0.0;
  std::vector<int> qs;
  std::vector<double> xray;   // a_{Omega_tau, q}(n_tau)
  double length_change = 0.0; // L_tau - L_0
  double n_at_0 = 0.0, n_at_half = 0.0;  // rows 1 and 2 of the linear operator
  double max_xray = 0.0;
  bool consistent = false;
};
IsospectralReport isospectral_residuals(const DeformationFamily& family, double tau, int q_max = 32,
                                        double h = kDefaultDeformationStep);

enum class RankOneVerdict { NotApplicable, Rigid, Violated };
std::string to_string(RankOneVerdict v);

struct RankOneReport {
  RankOneVerdict verdict = RankOneVerdict::NotApplicable;
  std::vector<double> taus;
  double max_n = 0.0;       // sup over samples of |n_tau|
  double max_distance = 0.0;  // sup over samples of the symmetric boundary distance to Omega_0
};
RankOneReport rank_one_check(const DeformationFamily& family, int samples = 5, double n_tol = 1e-8,
                             double distance_tol = 1e-8);

// Symmetric sup-distance between the boundaries, sampled on the first curve's grid and refined
// by Newton on the foot point.
double boundary_distance(const AffineCurve& a, const AffineCurve& b, int samples = 512);

}  // namespace sympb
