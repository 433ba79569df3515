#include "sympb/fourier_maps.hpp"

#include <cmath>
#include <numbers>

#include "sympb/errors.hpp"

namespace sympb {

EvenFourierMap EvenFourierMap::mode(int p, int N, double g) {
  if (p < 0 || p > N) throw InvalidInput("EvenFourierMap::mode: index outside truncation");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(N + 1);
  c[p] = 1.0;
  return EvenFourierMap(std::move(c), g);
}

double EvenFourierMap::derivative(double theta, int order) const {
  constexpr double tau = 2.0 * std::numbers::pi;
  double s = order == 0 ? coefficient(0) : 0.0;
  for (int p = 1; p <= degree(); ++p) {
    if (coeffs[p] == 0.0) continue;
    const double w = tau * p;
    const double arg = w * theta + 0.5 * std::numbers::pi * order;  // d^r cos(x) = cos(x + r pi/2)
    s += coeffs[p] * std::pow(w, order) * std::cos(arg);
  }
  return s;
}

double EvenFourierMap::norm() const {
  double n = std::abs(coefficient(0));
  for (int p = 1; p <= degree(); ++p) n = std::max(n, std::pow(double(p), gamma) * std::abs(coeffs[p]));
  return n;
}

double GammaSequence::norm() const {
  double n = size() ? std::abs(u[0]) : 0.0;
  for (int q = 1; q < size(); ++q) n = std::max(n, std::pow(double(q), gamma) * std::abs(u[q]));
  return n;
}

}  // namespace sympb
