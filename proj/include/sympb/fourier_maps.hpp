#pragma once

#include <Eigen/Dense>

namespace sympb {

inline constexpr double kDefaultGamma = 3.5;

// n(theta) = sum_{p=0..N} c_p cos(2 pi p theta): a 1-periodic even map.
struct EvenFourierMap {
  Eigen::VectorXd coeffs;
  double gamma = kDefaultGamma;

  EvenFourierMap() = default;
  explicit EvenFourierMap(Eigen::VectorXd c, double g = kDefaultGamma)
      : coeffs(std::move(c)), gamma(g) {}

  static EvenFourierMap mode(int p, int N, double g = kDefaultGamma);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double coefficient(int p) const { return p >= 0 && p < coeffs.size() ? coeffs[p] : 0.0; }
  double operator()(double theta) const { return derivative(theta, 0); }
  double derivative(double theta, int order) const;
  // sup{ p^gamma |c_p| : p >= 1 } together with |c_0|.
  double norm() const;
};

inline double hgamma_norm(const EvenFourierMap& n) { return n.norm(); }

// Sequence (u_q), q = 0..Q, with the weighted sup norm of h^gamma.
struct GammaSequence {
  Eigen::VectorXd u;
  double gamma = kDefaultGamma;

  GammaSequence() = default;
  explicit GammaSequence(Eigen::VectorXd v, double g = kDefaultGamma) : u(std::move(v)), gamma(g) {}
  int size() const { return static_cast<int>(u.size()); }
  double norm() const;
};

}  // namespace sympb
