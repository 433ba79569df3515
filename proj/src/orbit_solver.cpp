#include "sympb/orbit_solver.hpp"

#include <algorithm>
#include <cmath>

#include "sympb/errors.hpp"
#include "sympb/parallel.hpp"

namespace sympb {

namespace {

// Map between full indices j = 0..q-1 and the free coordinates x_0..x_{m-1}.
struct Reduction {
  int q = 0, m = 0;
  double L = 0.0;

  Reduction(int q_, double L_) : q(q_), m((q_ - 1) / 2), L(L_) {}

  // Free index of t_j, or -1 for pinned points; sign is dt_j / dx_r.
  int index(int j, double& sign) const {
    j = ((j % q) + q) % q;
    sign = 1.0;
    if (j >= 1 && j <= m) return j - 1;
    if (j >= q - m && j <= q - 1) {
      sign = -1.0;
      return q - j - 1;
    }
    return -1;
  }

  Eigen::VectorXd expand(const Eigen::VectorXd& x) const {
    Eigen::VectorXd t(q);
    t[0] = 0.0;
    for (int r = 0; r < m; ++r) {
      t[r + 1] = x[r];
      t[q - r - 1] = L - x[r];
    }
    if (q % 2 == 0) t[q / 2] = 0.5 * L;
    return t;
  }

  bool ordered(const Eigen::VectorXd& x) const {
    double prev = 0.0;
    for (int r = 0; r < m; ++r) {
      if (!(x[r] > prev)) return false;
      prev = x[r];
    }
    return prev < 0.5 * L;
  }
};

struct Evaluation {
  double action = 0.0;
  Eigen::VectorXd grad;   // reduced
  Eigen::MatrixXd hess;   // reduced
  double grad_norm = 0.0; // sup norm
};

Evaluation evaluate(const AffineCurve& curve, const Reduction& red, const Eigen::VectorXd& x,
                    bool with_hessian) {
  const int q = red.q;
  const Eigen::VectorXd t = red.expand(x);
  std::vector<CurveFrame> f(q);
  for (int j = 0; j < q; ++j) f[j] = curve.frame(t[j]);
  Evaluation ev;
  ev.grad = Eigen::VectorXd::Zero(red.m);
  if (with_hessian) ev.hess = Eigen::MatrixXd::Zero(red.m, red.m);
  for (int j = 0; j < q; ++j) {
    const auto& next = f[(j + 1) % q];
    const auto& prev = f[(j + q - 1) % q];
    ev.action += omega(f[j].g, next.g);
    double sj;
    const int rj = red.index(j, sj);
    if (rj < 0) continue;
    const Eigen::Vector2d chord = next.g - prev.g;
    ev.grad[rj] += sj * omega(f[j].d1, chord);
    if (!with_hessian) continue;
    // Row j of the full Hessian: diagonal and the two neighbours.
    ev.hess(rj, rj) += omega(f[j].d2, chord);
    for (int nb : {j - 1, j + 1}) {
      double sn;
      const int rn = red.index(nb, sn);
      if (rn < 0) continue;
      const auto& g = f[(nb + q) % q];
      const double h = nb > j ? omega(f[j].d1, g.d1) : omega(g.d1, f[j].d1);
      ev.hess(rj, rn) += sj * sn * h;
    }
  }
  ev.grad_norm = red.m ? ev.grad.cwiseAbs().maxCoeff() : 0.0;
  return ev;
}

}  // namespace

SymmetricOrbit finalize_orbit(const AffineCurve& curve, int q, Eigen::VectorXd t) {
  const double L = curve.perimeter();
  SymmetricOrbit o;
  o.q = q;
  o.t = std::move(t);
  o.gaps.resize(q);
  std::vector<Eigen::Vector2d> p(q), v(q);
  for (int j = 0; j < q; ++j) {
    p[j] = curve.position(o.t[j]);
    v[j] = curve.derivative(o.t[j], 1);
  }
  for (int j = 0; j < q; ++j) {
    const int n = (j + 1) % q;
    o.action += omega(p[j], p[n]);
    o.gaps[j] = (n == 0 ? L : o.t[n]) - o.t[j];
    o.residual = std::max(o.residual, std::abs(omega(p[n] - p[(j + q - 1) % q], v[j])));
  }
  o.gap_constant = q * o.gaps.maxCoeff();
  return o;
}

SymmetricOrbit ellipse_orbit(const AffineCurve& curve, int q) {
  if (q < 2) throw InvalidInput("orbit: q must be >= 2");
  if (!detect_conic(curve).is_ellipse) throw InvalidInput("ellipse_orbit: curve is not an ellipse");
  Eigen::VectorXd t(q);
  for (int j = 0; j < q; ++j) t[j] = curve.perimeter() * j / q;
  return finalize_orbit(curve, q, std::move(t));
}

SymmetricOrbit max_area_orbit(const AffineCurve& curve, int q, const OrbitOptions& opts) {
  if (q < 2) throw InvalidInput("orbit: q must be >= 2");
  const double L = curve.perimeter();
  const Reduction red(q, L);
  if (red.m == 0) return finalize_orbit(curve, q, red.expand(Eigen::VectorXd()));

  Eigen::VectorXd x(red.m);
  if (opts.initial) {
    if (opts.initial->size() != red.m) throw InvalidInput("orbit: initial guess has wrong size");
    x = *opts.initial;
  } else {
    for (int r = 0; r < red.m; ++r) x[r] = L * (r + 1) / q;
  }
  if (!red.ordered(x)) throw InvalidInput("orbit: initial guess is not ordered");

  Evaluation ev = evaluate(curve, red, x, true);
  int newton = 0, gradient = 0, polish = 0;
  double eta = 1.0 / q;  // gradient step, adapted
  bool converged = false;
  while (true) {
    if (ev.grad_norm < opts.gradient_tol) {
      converged = true;
      if (polish >= 4 || newton >= opts.max_newton) break;
    }
    bool moved = false;
    if (newton < opts.max_newton) {
      Eigen::LDLT<Eigen::MatrixXd> ldlt(ev.hess);
      const bool neg_def = ldlt.info() == Eigen::Success && (ldlt.vectorD().array() < 0.0).all();
      if (neg_def) {
        const Eigen::VectorXd dx = -ldlt.solve(ev.grad);
        ++newton;
        if (converged) ++polish;
        for (double lam = 1.0; lam >= 1.0 / 1024; lam *= 0.5) {
          const Eigen::VectorXd xn = x + lam * dx;
          if (!red.ordered(xn)) continue;
          Evaluation en = evaluate(curve, red, xn, true);
          if (en.action > ev.action || en.grad_norm < ev.grad_norm) {
            x = xn;
            ev = std::move(en);
            moved = true;
            break;
          }
        }
        if (!moved && converged) break;  // round-off floor reached
      }
    }
    if (!moved) {
      if (gradient >= opts.max_gradient) break;
      ++gradient;
      for (int tries = 0; tries < 40; ++tries) {
        const Eigen::VectorXd xn = x + eta * ev.grad;
        if (red.ordered(xn)) {
          Evaluation en = evaluate(curve, red, xn, true);
          if (en.action > ev.action) {
            x = xn;
            ev = std::move(en);
            eta *= 1.5;
            moved = true;
            break;
          }
        }
        eta *= 0.5;
      }
      if (!moved && !converged) throw NumericalError("orbit: gradient ascent stalled");
      if (!moved) break;
    }
  }
  if (!converged)
    throw NumericalError("orbit: no convergence for q = " + std::to_string(q) +
                         " (gradient " + std::to_string(ev.grad_norm) + ")");
  auto o = finalize_orbit(curve, q, red.expand(x));
  o.newton_iterations = newton;
  o.gradient_iterations = gradient;
  return o;
}

CorrectionProfiles correction_profiles(const AffineCurve& curve, double theta) {
  const double L = curve.perimeter();
  const double s = L * theta;
  const double k0 = curve.curvature_mean();
  const double k = curve.curvature(s);
  const double dk = curve.curvature_derivative(s, 1);
  CorrectionProfiles c;
  c.a0 = L * L / 30.0 * curve.curvature_oscillation_integral(s);
  c.b0 = std::pow(L, 3) / 30.0 * (k - k0);
  c.a1_literal = -std::pow(L, 3) / 30.0 * (k - curve.curvature(0.0));
  c.b1_literal = -std::pow(L, 4) / 60.0 * dk;
  c.a1 = 0.0;
  c.b1 = std::pow(L, 4) / 60.0 * dk;
  return c;
}

namespace {

double periodic_derivative_residual(const Eigen::VectorXd& f, const Eigen::VectorXd& df) {
  const int n = static_cast<int>(f.size());
  const auto s = PeriodicSeries::from_samples({f.data(), size_t(n)}, 1.0);
  double r = 0.0;
  for (int j = 0; j < n; ++j) r = std::max(r, std::abs(s.derivative(double(j) / n, 1) - df[j]));
  return r;
}

}  // namespace

OrbitAsymptotics orbit_asymptotics(const AffineCurve& curve, const std::vector<int>& qs) {
  if (qs.empty() || qs.size() > 3) throw InvalidInput("orbit_asymptotics: need 1 to 3 values of q");
  const int q0 = qs.front();
  if (q0 < 3) throw InvalidInput("orbit_asymptotics: q must be >= 3");
  for (size_t i = 1; i < qs.size(); ++i)
    if (qs[i] <= qs[i - 1] || qs[i] % q0 != 0)
      throw InvalidInput("orbit_asymptotics: q values must increase and be multiples of the first");

  const double L = curve.perimeter();
  std::vector<SymmetricOrbit> orbits(qs.size());
  parallel_for(int(qs.size()), [&](int i) { orbits[i] = max_area_orbit(curve, qs[i]); });

  OrbitAsymptotics out;
  out.qs = qs;
  for (const auto& o : orbits) {
    double ra = 0.0, rb = 0.0;
    for (int j = 0; j < o.q; ++j) {
      const auto c = correction_profiles(curve, double(j) / o.q);
      const double q2 = double(o.q) * o.q;
      ra = std::max(ra, std::abs(q2 * (o.t[j] - L * j / o.q) - c.a0));
      rb = std::max(rb, std::abs(q2 * o.q * (o.gaps[j] - L / o.q) - c.b0));
    }
    out.a0_sup_residual.push_back(ra);
    out.b0_sup_residual.push_back(rb);
  }

  const int n = static_cast<int>(qs.size());
  // Rows: 1, 1/q, 1/q^2 for the chosen number of levels.
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) V(i, c) = std::pow(1.0 / qs[i], c);
  const auto lu = V.fullPivLu();

  out.theta.resize(q0);
  for (auto* v : {&out.a0_closed, &out.a0_empirical, &out.a1_empirical, &out.a1_closed,
                  &out.a1_literal, &out.b0_closed, &out.b0_empirical, &out.b1_empirical,
                  &out.b1_closed, &out.b1_literal})
    v->setZero(q0);
  for (int j = 0; j < q0; ++j) {
    const double th = double(j) / q0;
    out.theta[j] = th;
    Eigen::VectorXd fa(n), fb(n);
    for (int i = 0; i < n; ++i) {
      const int jj = j * (qs[i] / q0);
      const double q = qs[i];
      fa[i] = q * q * (orbits[i].t[jj] - L * th);
      fb[i] = q * q * q * (orbits[i].gaps[jj] - L / q);
    }
    const Eigen::VectorXd ca = lu.solve(fa), cb = lu.solve(fb);
    const auto c = correction_profiles(curve, th);
    out.a0_closed[j] = c.a0;
    out.b0_closed[j] = c.b0;
    out.a1_closed[j] = c.a1;
    out.a1_literal[j] = c.a1_literal;
    out.b1_closed[j] = c.b1;
    out.b1_literal[j] = c.b1_literal;
    out.a0_empirical[j] = ca[0];
    out.b0_empirical[j] = cb[0];
    if (n > 1) {
      out.a1_empirical[j] = ca[1];
      out.b1_empirical[j] = cb[1];
    }
  }
  {
    constexpr int kFine = 1024;  // the closed forms are checked on their own fine grid
    Eigen::VectorXd a(kFine), b(kFine);
    for (int j = 0; j < kFine; ++j) {
      const auto c = correction_profiles(curve, double(j) / kFine);
      a[j] = c.a0;
      b[j] = c.b0;
    }
    out.a0_derivative_residual = periodic_derivative_residual(a, b);
  }
  out.a0_derivative_residual_empirical =
      periodic_derivative_residual(out.a0_empirical, out.b0_empirical);
  return out;
}

}  // namespace sympb
