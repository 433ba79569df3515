#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "sympb/curve_geometry.hpp"
#include "sympb/fourier_maps.hpp"
#include "sympb/orbit_solver.hpp"

namespace sympb {

struct SpectrumRow {
  int q = 0;
  double action = 0.0;
  double residual = 0.0;
};

struct SpectrumTable {
  std::string domain;
  std::vector<SpectrumRow> rows;
  double perimeter = 0.0;
  double curvature_integral = 0.0;  // int_0^L k dt
  double enclosed_area = 0.0;

  const SpectrumRow& row(int q) const;
};

// Maximal symmetric orbit actions for q = q_min..q_max (q_min >= 2), parallel over q.
SpectrumTable spectrum_table(const AffineCurve& curve, int q_max, int q_min = 2);

// Ratio between computed expansion coefficients and the stated a1 = L^3/12,
// a2 = -L^4/240 int k, read off the unit-circle expansion of q sin(2 pi / q).
double convention_constant();

struct AsymptoticFit {
  int q_min = 0, q_max = 0;
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double c3 = 0.0;  // nuisance q^-6 term absorbing the first neglected order
  double kappa = 0.0;
  double a1_paper = 0.0, a2_paper = 0.0;        // c1 / kappa, c2 / kappa
  double a1_formula = 0.0, a2_formula = 0.0;    // L^3/12, -L^4/240 int k
  double residual = 0.0;                        // max |A_q - model|
  double condition = 0.0;                       // of the column-scaled design matrix
  double twice_area = 0.0;
};

// Weighted least squares (weights q^4) of c0 + c1/q^2 + c2/q^4 + c3/q^6 over [q_min, q_max].
AsymptoticFit fit_asymptotics(const SpectrumTable& table, int q_min, int q_max = -1);

// rho^(-1/3)(t_j) |gamma(t_{j+1}) - gamma(t_{j-1})|.
Eigen::VectorXd chord_weights(const AffineCurve& curve, const SymmetricOrbit& orbit);

// sum_k n(t_k / L) w_k.
double xray_transform(const AffineCurve& curve, const SymmetricOrbit& orbit, const EvenFourierMap& n);
double xray_transform(const AffineCurve& curve, const SymmetricOrbit& orbit,
                      const std::function<double(double)>& n);

// Chord-weight expansion coefficients at affine parameter s.
struct ChordCoefficients {
  double c0 = 0.0;
  double c1 = 0.0;          // (k_E L_E^3 - L^3 k)/3 + (L^3/15)(k - k0)
  double c2 = 0.0;          // 0 (symmetry-consistent)
  double c2_literal = 0.0;  // -(L^4/15) k'
};
ChordCoefficients chord_coefficients(const AffineCurve& curve, double s);

struct ChordWeightProfile {
  int q = 0;
  Eigen::VectorXd weights;
  double ellipse_weight = 0.0;     // 2 k_E^(-1/2) sin(2 pi / q)
  Eigen::VectorXd model;           // with c2 = 0
  Eigen::VectorXd model_literal;   // with the literal c2
  double residual = 0.0;           // max |w - model|
  double residual_literal = 0.0;
  double residual_leading = 0.0;   // max |w - ellipse_weight - c0/q|
};
ChordWeightProfile chord_weight_profile(const AffineCurve& curve, const SymmetricOrbit& orbit);
ChordWeightProfile chord_weight_profile(const AffineCurve& curve, int q);

// Mean-value functionals lambda, alpha1(n), alpha2(n) of the near-ellipse X-ray expansion,
// by trapezoidal quadrature on a fixed grid in theta.
class CorrectionQuadrature {
 public:
  explicit CorrectionQuadrature(const AffineCurve& curve, int grid = 1024);
  double lambda() const { return lambda_; }
  double alpha1(const EvenFourierMap& n) const;
  double alpha2(const EvenFourierMap& n) const;          // literal c2, a1 forms
  double alpha2_symmetric(const EvenFourierMap&) const { return 0.0; }
  double k_E() const { return k_E_; }
  double L_E() const { return L_E_; }

 private:
  double lambda_ = 0.0, k_E_ = 0.0, L_E_ = 0.0, L_ = 0.0, W0_ = 0.0;
  Eigen::VectorXd theta_, c1_, c2_lit_, a0_, a1_lit_;
};

struct CorrectionFunctionals {
  double lambda = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};
CorrectionFunctionals correction_functionals(const AffineCurve& curve, const EvenFourierMap& n);

// mu_q = 2 k_E^(-1/2) q sin(2 pi / q).
double ellipse_multiplier(double k_E, int q);

}  // namespace sympb
