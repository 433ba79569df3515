#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sympb/area_spectrum.hpp"
#include "sympb/curve_geometry.hpp"
#include "sympb/fourier_maps.hpp"
#include "sympb/orbit_solver.hpp"

namespace sympb {

struct CyclicSum {
  double value = 0.0;    // [n]_q, direct sum over j/q
  double divisor = 0.0;  // sum_{m >= 0} c_{mq}
  double starred = 0.0;  // [n]_q - c_0
};
// Throws ConsistencyError if the two evaluations differ by more than 1e-12 (relative to |n|).
CyclicSum cyclic_sum(const EvenFourierMap& n, int q);

int mobius(std::int64_t k);
// First k <= k_max where sum_{d | k} mu(d) != [k == 1], or 0 if none.
std::int64_t mobius_identity_failure(std::int64_t k_max);

// u_0 = c_0, u_1 = n(0), u_2 = n(1/2), u_q = mu_q [n]_q^* for 3 <= q <= Q.
GammaSequence apply_T_ellipse(const EvenFourierMap& n, double k_E, int Q);
// Two-sided inverse on the truncation N = Q (one-sided when they differ).
EvenFourierMap invert_T_ellipse(const GammaSequence& u, double k_E, int N);

// Maximal orbits and chord weights for q = 3..q_max, reused across many maps n.
class DomainXray {
 public:
  DomainXray(const AffineCurve& curve, int q_max);
  int q_max() const { return q_max_; }
  double k_E() const { return quad_.k_E(); }
  const SymmetricOrbit& orbit(int q) const { return orbits_.at(q - 3); }
  double xray(int q, const EvenFourierMap& n) const;
  double xray_mode(int q, int p) const;  // n = cos(2 pi p theta)
  const CorrectionQuadrature& quadrature() const { return quad_; }
  // Rows 0..q_max of T_Omega(n).
  GammaSequence apply(const EvenFourierMap& n) const;

 private:
  double L_ = 0.0;
  int q_max_ = 0;
  std::vector<SymmetricOrbit> orbits_;
  std::vector<Eigen::VectorXd> weights_;
  CorrectionQuadrature quad_;
};

GammaSequence apply_T_domain(const AffineCurve& curve, const EvenFourierMap& n, int q_max);

enum class Provenance { EllipseClosedForm, DomainNumerical };

struct TruncatedIsospectralOperator {
  Eigen::MatrixXd matrix;  // (Q+1) x (N+1), rows q, columns p
  Provenance provenance = Provenance::EllipseClosedForm;
  double k_E = 1.0;
  double L_E = 0.0;
  double gamma = kDefaultGamma;
  std::optional<int> q0;

  int N() const { return static_cast<int>(matrix.cols()) - 1; }
  int Q() const { return static_cast<int>(matrix.rows()) - 1; }
  // Row q scaled by q^gamma, column p by p^-gamma (index 0 unscaled).
  Eigen::MatrixXd weighted() const;
};

TruncatedIsospectralOperator ellipse_operator(double k_E, int N, int Q, double gamma = kDefaultGamma);
TruncatedIsospectralOperator domain_operator(const DomainXray& xr, int N, double gamma = kDefaultGamma);
TruncatedIsospectralOperator domain_operator(const AffineCurve& curve, int N, int Q,
                                             double gamma = kDefaultGamma);

struct KernelReport {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double condition = 0.0;
  int kernel_dim = 0;
  Eigen::MatrixXd kernel_basis;  // columns, unweighted Fourier coefficients
  std::optional<int> q0;
};
KernelReport kernel_analysis(const TruncatedIsospectralOperator& op);

struct SplitReport {
  int q0 = 0;
  Eigen::MatrixXd F;  // high-mode coefficients (p > q0) as a map of the low modes (p <= q0)
  double tail_sigma_min = 0.0;
  double tail_sigma_max = 0.0;
  KernelReport assembled;
  int kernel_dim_bound = 0;  // q0 + 1
};
SplitReport finite_rank_split(const TruncatedIsospectralOperator& op, int q0);

struct BoundCheck {
  std::string name;
  int instances = 0;
  int violations = 0;
  double max_ratio = 0.0;  // largest lhs / rhs seen
  std::string witness;     // first violating instance, if any
};
struct BoundSuiteReport {
  double gamma = 0.0;
  int r = 0;
  std::vector<BoundCheck> checks;
  int total_violations() const;
};
BoundSuiteReport bound_suite(double gamma, int r = 2, int instances = 1000,
                             std::uint64_t seed = 20240611u);

// Product of two even maps, degree N1 + N2.
EvenFourierMap multiply(const EvenFourierMap& a, const EvenFourierMap& b);
// max_{k <= r} sup_theta |n^(k)(theta)| on a grid of the given size.
double c_r_norm(const EvenFourierMap& n, int r, int grid);

}  // namespace sympb
