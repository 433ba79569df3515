#include "sympb/area_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sympb/errors.hpp"
#include "sympb/parallel.hpp"

namespace sympb {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr int kFitTerms = 4;
constexpr double kMaxFitCondition = 1e12;
}  // namespace

const SpectrumRow& SpectrumTable::row(int q) const {
  for (const auto& r : rows)
    if (r.q == q) return r;
  throw InvalidInput("spectrum table has no row q = " + std::to_string(q));
}

SpectrumTable spectrum_table(const AffineCurve& curve, int q_max, int q_min) {
  if (q_min < 2 || q_max < std::max(3, q_min)) throw InvalidInput("spectrum: need 2 <= q_min, q_max >= 3");
  SpectrumTable table;
  table.domain = curve.source() ? curve.source()->identifier() : std::string("affine-image");
  table.perimeter = curve.perimeter();
  table.curvature_integral = curve.curvature_mean() * curve.perimeter();
  table.enclosed_area = curve.enclosed_area();
  table.rows.resize(q_max - q_min + 1);
  parallel_for(int(table.rows.size()), [&](int i) {
    const int q = q_min + i;
    try {
      const auto o = max_area_orbit(curve, q);
      table.rows[i] = {q, o.action, o.residual};
    } catch (const NumericalError& e) {
      throw NumericalError("spectrum: orbit solver failed at q = " + std::to_string(q) + ": " + e.what());
    }
  });
  return table;
}

double convention_constant() {
  const double L = 2.0 * kPi;  // unit circle: k = 1, int k = 2 pi
  const double c1 = -std::pow(2.0 * kPi, 3) / 6.0;
  const double c2 = std::pow(2.0 * kPi, 5) / 120.0;
  const double k1 = c1 / (std::pow(L, 3) / 12.0);
  const double k2 = c2 / (-std::pow(L, 4) / 240.0 * (2.0 * kPi));
  if (std::abs(k1 - k2) > 1e-12 * std::abs(k1))
    throw ConsistencyError("convention constant differs between the 1/q^2 and 1/q^4 terms");
  return k1;
}

AsymptoticFit fit_asymptotics(const SpectrumTable& table, int q_min, int q_max) {
  if (q_max < 0) {
    for (const auto& r : table.rows) q_max = std::max(q_max, r.q);
  }
  if (q_min < 3 || q_max < 4 * q_min)
    throw InvalidInput("fit: need q_min >= 3 and q_max >= 4 q_min");
  std::vector<const SpectrumRow*> rows;
  for (int q = q_min; q <= q_max; ++q) rows.push_back(&table.row(q));

  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd X(n, kFitTerms);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double q = rows[i]->q;
    for (int c = 0; c < kFitTerms; ++c) X(i, c) = q * q * std::pow(q, -2.0 * c);  // weight q^2 per row
    y[i] = q * q * rows[i]->action;
  }
  const Eigen::VectorXd scale = X.colwise().norm().transpose();
  const Eigen::MatrixXd Xs = X * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  AsymptoticFit fit;
  fit.q_min = q_min;
  fit.q_max = q_max;
  fit.condition = s[0] / s[s.size() - 1];
  if (!(fit.condition < kMaxFitCondition)) throw NumericalError("fit: ill-conditioned design (widen the q range)");
  const Eigen::VectorXd c = svd.solve(y).cwiseQuotient(scale);
  fit.c0 = c[0];
  fit.c1 = c[1];
  fit.c2 = c[2];
  fit.c3 = c[3];
  for (int i = 0; i < n; ++i) {
    const double q = rows[i]->q;
    const double model = c[0] + c[1] / (q * q) + c[2] / std::pow(q, 4) + c[3] / std::pow(q, 6);
    fit.residual = std::max(fit.residual, std::abs(rows[i]->action - model));
  }
  fit.kappa = convention_constant();
  fit.a1_paper = fit.c1 / fit.kappa;
  fit.a2_paper = fit.c2 / fit.kappa;
  fit.a1_formula = std::pow(table.perimeter, 3) / 12.0;
  fit.a2_formula = -std::pow(table.perimeter, 4) / 240.0 * table.curvature_integral;
  fit.twice_area = 2.0 * table.enclosed_area;
  return fit;
}

Eigen::VectorXd chord_weights(const AffineCurve& curve, const SymmetricOrbit& orbit) {
  const int q = orbit.q;
  std::vector<Eigen::Vector2d> p(q);
  for (int j = 0; j < q; ++j) p[j] = curve.position(orbit.t[j]);
  Eigen::VectorXd w(q);
  for (int j = 0; j < q; ++j) {
    const double len = (p[(j + 1) % q] - p[(j + q - 1) % q]).norm();
    w[j] = len / std::cbrt(curve.rho(orbit.t[j]));
  }
  return w;
}

double xray_transform(const AffineCurve& curve, const SymmetricOrbit& orbit,
                      const std::function<double(double)>& n) {
  const Eigen::VectorXd w = chord_weights(curve, orbit);
  double s = 0.0;
  for (int j = 0; j < orbit.q; ++j) s += n(orbit.t[j] / curve.perimeter()) * w[j];
  return s;
}

double xray_transform(const AffineCurve& curve, const SymmetricOrbit& orbit, const EvenFourierMap& n) {
  return xray_transform(curve, orbit, [&](double th) { return n(th); });
}

double ellipse_multiplier(double k_E, int q) {
  return 2.0 / std::sqrt(k_E) * q * std::sin(2.0 * kPi / q);
}

ChordCoefficients chord_coefficients(const AffineCurve& curve, double s) {
  const double L = curve.perimeter();
  const double L_E = L;
  const double k_E = std::pow(2.0 * kPi / L_E, 2);
  const double k = curve.curvature(s);
  const double k0 = curve.curvature_mean();
  ChordCoefficients c;
  c.c0 = 2.0 * (L - L_E);
  c.c1 = (k_E * std::pow(L_E, 3) - std::pow(L, 3) * k) / 3.0 + std::pow(L, 3) / 15.0 * (k - k0);
  c.c2 = 0.0;
  c.c2_literal = -std::pow(L, 4) / 15.0 * curve.curvature_derivative(s, 1);
  return c;
}

ChordWeightProfile chord_weight_profile(const AffineCurve& curve, const SymmetricOrbit& orbit) {
  const int q = orbit.q;
  const double L = curve.perimeter();
  const double k_E = std::pow(2.0 * kPi / L, 2);
  ChordWeightProfile out;
  out.q = q;
  out.weights = chord_weights(curve, orbit);
  out.ellipse_weight = 2.0 / std::sqrt(k_E) * std::sin(2.0 * kPi / q);
  out.model.resize(q);
  out.model_literal.resize(q);
  for (int j = 0; j < q; ++j) {
    const auto c = chord_coefficients(curve, L * j / q);
    const double base = out.ellipse_weight + c.c0 / q;
    out.model[j] = base + c.c1 / std::pow(q, 3) + c.c2 / std::pow(q, 4);
    out.model_literal[j] = base + c.c1 / std::pow(q, 3) + c.c2_literal / std::pow(q, 4);
    out.residual = std::max(out.residual, std::abs(out.weights[j] - out.model[j]));
    out.residual_literal = std::max(out.residual_literal, std::abs(out.weights[j] - out.model_literal[j]));
    out.residual_leading = std::max(out.residual_leading, std::abs(out.weights[j] - base));
  }
  return out;
}

ChordWeightProfile chord_weight_profile(const AffineCurve& curve, int q) {
  return chord_weight_profile(curve, max_area_orbit(curve, q));
}

CorrectionQuadrature::CorrectionQuadrature(const AffineCurve& curve, int grid) {
  if (grid < 16) throw InvalidInput("correction quadrature: grid too small");
  L_ = curve.perimeter();
  L_E_ = L_;
  k_E_ = std::pow(2.0 * kPi / L_E_, 2);
  lambda_ = 2.0 * (L_ - L_E_);
  W0_ = 4.0 * kPi / std::sqrt(k_E_) + lambda_;
  theta_.resize(grid);
  c1_.resize(grid);
  c2_lit_.resize(grid);
  a0_.resize(grid);
  a1_lit_.resize(grid);
  for (int i = 0; i < grid; ++i) {
    theta_[i] = double(i) / grid;
    const double s = L_ * theta_[i];
    const auto c = chord_coefficients(curve, s);
    const auto p = correction_profiles(curve, theta_[i]);
    c1_[i] = c.c1;
    c2_lit_[i] = c.c2_literal;
    a0_[i] = p.a0;
    a1_lit_[i] = p.a1_literal;
  }
}

double CorrectionQuadrature::alpha1(const EvenFourierMap& n) const {
  double s = 0.0;
  for (int i = 0; i < theta_.size(); ++i)
    s += c1_[i] * n(theta_[i]) + W0_ * a0_[i] / L_ * n.derivative(theta_[i], 1);
  return s / theta_.size();
}

double CorrectionQuadrature::alpha2(const EvenFourierMap& n) const {
  double s = 0.0;
  for (int i = 0; i < theta_.size(); ++i)
    s += c2_lit_[i] * n(theta_[i]) + W0_ * a1_lit_[i] / L_ * n.derivative(theta_[i], 1);
  return s / theta_.size();
}

CorrectionFunctionals correction_functionals(const AffineCurve& curve, const EvenFourierMap& n) {
  const CorrectionQuadrature quad(curve);
  return {quad.lambda(), quad.alpha1(n), quad.alpha2(n)};
}

}  // namespace sympb
