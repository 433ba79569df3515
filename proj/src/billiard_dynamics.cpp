#include "sympb/billiard_dynamics.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "sympb/errors.hpp"

namespace sympb {

namespace {

constexpr int kTaylorOrder = 72;
constexpr double kResidualTol = 1e-10;

// Safeguarded Newton for a function with f(lo) > 0 > f(hi).
template <class F, class DF>
double bracketed_newton(F&& f, DF&& df, double lo, double hi, double x, double xtol) {
  for (int iter = 0; iter < 200; ++iter) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx > 0.0) lo = x; else hi = x;
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= xtol || hi - lo <= xtol) return next;
    x = next;
  }
  throw NumericalError("bracketed Newton did not converge");
}

}  // namespace

double tangent_antipode(const AffineCurve& curve, double t) {
  const double L = curve.perimeter();
  const Eigen::Vector2d v = curve.derivative(t, 1);
  auto f = [&](double tau) { return omega(v, curve.derivative(tau, 1)); };
  auto df = [&](double tau) { return omega(v, curve.derivative(tau, 2)); };
  constexpr int kSamples = 32;
  double prev = t;
  for (int k = 1; k < kSamples; ++k) {
    const double tau = t + L * k / kSamples;
    if (f(tau) <= 0.0) {
      // Unique sign change of det(g'(t), g'(.)) on (t, t + L).
      return bracketed_newton(f, df, prev, tau, 0.5 * (prev + tau), 1e-15 * L);
    }
    prev = tau;
  }
  throw NumericalError("tangent_antipode: no parallel tangent found");
}

bool in_phase_space(const AffineCurve& curve, const PhaseChord& chord) {
  if (!(chord.gap > 0.0) || !(chord.gap < curve.perimeter())) return false;
  return chord.t0 + chord.gap < tangent_antipode(curve, chord.t0);
}

double bounce_residual(const AffineCurve& curve, double t0, double t1, double t2) {
  return std::abs(omega(curve.position(t2) - curve.position(t0), curve.derivative(t1, 1)));
}

GlancingIncrement glancing_increment(const AffineCurve& curve, double t_mid, double eps) {
  GlancingIncrement out;
  std::array<double, kTaylorOrder> kappa{};
  curve.curvature_series().taylor_coefficients(t_mid, kappa);

  // beta = B - s with B'' = -k B, B(0) = 0, B'(0) = 1, in powers of s.
  std::array<double, kTaylorOrder + 2> b{};
  for (int n = 0; n + 2 < int(b.size()); ++n) {
    double acc = 0.0;
    for (int i = 0; i <= n && i < kTaylorOrder; ++i) {
      const int j = n - i;
      acc += kappa[i] * (b[j] + (j == 1 ? 1.0 : 0.0));
    }
    b[n + 2] = -acc / ((n + 2.0) * (n + 1.0));
  }

  // D(s) = int_0^s beta. The odd-power part cancels exactly in D(-eps) - D(eps).
  double sym = 0.0, tail = 0.0;
  double p = eps;  // eps^(n+1)
  for (int n = 0; n < int(b.size()); ++n) {
    if (n % 2 == 0) sym -= 2.0 * b[n] * p / (n + 1.0);
    if (n >= int(b.size()) - 4) tail = std::max(tail, std::abs(b[n]) * p);
    p *= eps;
  }
  const double scale = std::abs(b[3]) * std::pow(eps, 4) + std::abs(sym);
  out.converged = std::isfinite(sym) && tail <= 1e-17 * std::max(scale, 1e-300);
  out.leading = kappa[1] * std::pow(eps, 4) / 30.0;

  // d = 2 (D(-eps) - D(eps + d)) / (2 eps + d), by fixed point.
  auto shift = [&](double d) {  // D(eps + d) - D(eps)
    double acc = 0.0;
    for (int n = 3; n < int(b.size()); ++n) {
      // (eps+d)^(n+1) - eps^(n+1) = d * sum_i (eps+d)^i eps^(n-i)
      double s = 0.0, up = 1.0;
      const double ratio = (eps + d) / eps;
      double base = std::pow(eps, n);
      for (int i = 0; i <= n; ++i) {
        s += up * base;
        up *= ratio;
      }
      acc += b[n] * d * s / (n + 1.0);
    }
    return acc;
  };
  double d = sym / eps;
  for (int iter = 0; iter < 50; ++iter) {
    const double next = 2.0 * (sym - shift(d)) / (2.0 * eps + d);
    const bool done = std::abs(next - d) <= 1e-17 * std::abs(next);
    d = next;
    if (done) break;
  }
  out.d = d;
  return out;
}

PhaseChord step(const AffineCurve& curve, const PhaseChord& chord) {
  const double L = curve.perimeter();
  if (!(chord.gap >= 0.0) || !(chord.gap < L)) throw InvalidInput("step: gap outside [0, L)");
  if (chord.gap == 0.0) return {chord.t1, chord.t1, 0.0};
  const double t0 = chord.t0, t1 = chord.t0 + chord.gap;
  const double t0s = tangent_antipode(curve, t0);
  if (std::abs(t1 - t0s) <= 1e-13 * L) return {t1, t0 + L, t0 + L - t1};
  if (t1 > t0s) throw InvalidInput("step: chord outside the phase space");

  if (chord.gap <= L / 32.0) {
    const auto gi = glancing_increment(curve, t1, chord.gap);
    if (gi.converged) {
      const double gap = chord.gap + gi.d;
      return {t1, t1 + gap, gap};
    }
  }

  const double t1s = tangent_antipode(curve, t1);
  const Eigen::Vector2d p0 = curve.position(t0);
  const Eigen::Vector2d v1 = curve.derivative(t1, 1);
  auto R = [&](double tau) { return omega(curve.position(tau) - p0, v1); };
  auto dR = [&](double tau) { return omega(curve.derivative(tau, 1), v1); };
  double guess = std::min(t1 + chord.gap, 0.5 * (t1 + t1s));
  const double t2 = bracketed_newton(R, dR, t1, t1s, guess, 1e-15 * L);
  if (std::abs(R(t2)) > kResidualTol)
    throw NumericalError("step: bounce residual above tolerance");
  return {t1, t2, t2 - t1};
}

double generating_function(const AffineCurve& curve, double t, double tp) {
  return omega(curve.position(t), curve.position(tp));
}

double generating_function_d1(const AffineCurve& curve, double t, double tp) {
  return omega(curve.derivative(t, 1), curve.position(tp));
}

double generating_function_d2(const AffineCurve& curve, double t, double tp) {
  return omega(curve.position(t), curve.derivative(tp, 1));
}

double check_variational(const AffineCurve& curve, const PhaseChord& chord) {
  const auto next = step(curve, chord);
  return std::abs(generating_function_d2(curve, chord.t0, chord.t1) +
                  generating_function_d1(curve, next.t0, next.t1));
}

LazutkinDefect lazutkin_defect(const AffineCurve& curve, double t, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("lazutkin_defect: eps must be positive");
  const auto gi = glancing_increment(curve, t + eps, eps);
  if (!gi.converged) throw NumericalError("lazutkin_defect: eps outside the local expansion range");
  return {eps, eps + gi.d, eps + gi.leading, gi.d - gi.leading};
}

}  // namespace sympb
