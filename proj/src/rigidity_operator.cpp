#include "sympb/rigidity_operator.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <unsupported/Eigen/FFT>

#include "sympb/errors.hpp"
#include "sympb/parallel.hpp"

namespace sympb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kKernelTol = 1e-8;

double weight(int index, double gamma) { return index == 0 ? 1.0 : std::pow(double(index), gamma); }

double sum_abs(const EvenFourierMap& n) { return n.coeffs.cwiseAbs().sum(); }

}  // namespace

CyclicSum cyclic_sum(const EvenFourierMap& n, int q) {
  if (q < 1) throw InvalidInput("cyclic_sum: q must be >= 1");
  CyclicSum s;
  for (int j = 0; j < q; ++j) s.value += n(double(j) / q);
  s.value /= q;
  for (int p = 0; p <= n.degree(); p += q) s.divisor += n.coeffs[p];
  if (std::abs(s.value - s.divisor) > 1e-12 * std::max(1.0, sum_abs(n)))
    throw ConsistencyError("cyclic_sum: direct and divisor evaluations disagree");
  s.starred = s.value - n.coefficient(0);
  return s;
}

int mobius(std::int64_t k) {
  if (k < 1) throw InvalidInput("mobius: k must be >= 1");
  int sign = 1;
  for (std::int64_t p = 2; p * p <= k; ++p) {
    if (k % p != 0) continue;
    k /= p;
    if (k % p == 0) return 0;
    sign = -sign;
  }
  if (k > 1) sign = -sign;
  return sign;
}

std::int64_t mobius_identity_failure(std::int64_t k_max) {
  std::vector<int> mu(k_max + 1);
  for (std::int64_t k = 1; k <= k_max; ++k) mu[k] = mobius(k);
  std::vector<long> sums(k_max + 1, 0);
  for (std::int64_t d = 1; d <= k_max; ++d)
    for (std::int64_t k = d; k <= k_max; k += d) sums[k] += mu[d];
  for (std::int64_t k = 1; k <= k_max; ++k)
    if (sums[k] != (k == 1 ? 1 : 0)) return k;
  return 0;
}

GammaSequence apply_T_ellipse(const EvenFourierMap& n, double k_E, int Q) {
  if (Q < 2) throw InvalidInput("apply_T_ellipse: Q must be >= 2");
  Eigen::VectorXd u = Eigen::VectorXd::Zero(Q + 1);
  u[0] = n.coefficient(0);
  for (int p = 0; p <= n.degree(); ++p) {
    u[1] += n.coeffs[p];
    u[2] += (p % 2 ? -1.0 : 1.0) * n.coeffs[p];
  }
  for (int q = 3; q <= Q; ++q) {
    double starred = 0.0;  // divisor form of [n]_q - c_0
    for (int p = q; p <= n.degree(); p += q) starred += n.coeffs[p];
    u[q] = ellipse_multiplier(k_E, q) * starred;
  }
  return GammaSequence(std::move(u), n.gamma);
}

EvenFourierMap invert_T_ellipse(const GammaSequence& u, double k_E, int N) {
  const int Q = u.size() - 1;
  if (Q < 2 || N < 2) throw InvalidInput("invert_T_ellipse: need Q, N >= 2");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(Q + 1);
  for (int q = 3; q <= Q; ++q) {
    const double mu = ellipse_multiplier(k_E, q);
    if (!(mu > 0.0)) throw ConsistencyError("invert_T_ellipse: vanishing multiplier");
    v[q] = u.u[q] / mu;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(N + 1);
  c[0] = u.u[0];
  for (int j = 3; j <= N; ++j)
    for (int m = 1; m * j <= Q; ++m) c[j] += mobius(m) * v[m * j];
  double r1 = u.u[1] - c[0], r2 = u.u[2] - c[0];
  for (int j = 3; j <= N; ++j) {
    r1 -= c[j];
    r2 -= (j % 2 ? -1.0 : 1.0) * c[j];
  }
  c[1] = 0.5 * (r1 - r2);
  c[2] = 0.5 * (r1 + r2);
  return EvenFourierMap(std::move(c), u.gamma);
}

DomainXray::DomainXray(const AffineCurve& curve, int q_max)
    : L_(curve.perimeter()), q_max_(q_max), quad_(curve) {
  if (q_max < 3) throw InvalidInput("DomainXray: q_max must be >= 3");
  orbits_.resize(q_max - 2);
  weights_.resize(q_max - 2);
  parallel_for(q_max - 2, [&](int i) {
    orbits_[i] = max_area_orbit(curve, i + 3);
    weights_[i] = chord_weights(curve, orbits_[i]);
  });
}

double DomainXray::xray(int q, const EvenFourierMap& n) const {
  const auto& o = orbit(q);
  const auto& w = weights_[q - 3];
  double s = 0.0;
  for (int j = 0; j < q; ++j) s += n(o.t[j] / L_) * w[j];
  return s;
}

double DomainXray::xray_mode(int q, int p) const {
  const auto& o = orbit(q);
  const auto& w = weights_[q - 3];
  double s = 0.0;
  for (int j = 0; j < q; ++j) s += std::cos(2.0 * kPi * p * o.t[j] / L_) * w[j];
  return s;
}

GammaSequence DomainXray::apply(const EvenFourierMap& n) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(q_max_ + 1);
  u[0] = n.coefficient(0);
  u[1] = n(0.0);
  u[2] = n(0.5);
  const double a1 = quad_.alpha1(n), a2 = quad_.alpha2(n);
  for (int q = 3; q <= q_max_; ++q) {
    const double qq = q;
    u[q] = xray(q, n) - (ellipse_multiplier(k_E(), q) + quad_.lambda()) * n.coefficient(0) -
           a1 / (qq * qq) - a2 / (qq * qq * qq);
  }
  return GammaSequence(std::move(u), n.gamma);
}

GammaSequence apply_T_domain(const AffineCurve& curve, const EvenFourierMap& n, int q_max) {
  return DomainXray(curve, q_max).apply(n);
}

Eigen::MatrixXd TruncatedIsospectralOperator::weighted() const {
  Eigen::MatrixXd W = matrix;
  for (int q = 0; q <= Q(); ++q) W.row(q) *= weight(q, gamma);
  for (int p = 0; p <= N(); ++p) W.col(p) /= weight(p, gamma);
  return W;
}

TruncatedIsospectralOperator ellipse_operator(double k_E, int N, int Q, double gamma) {
  if (N < 2 || Q < 2) throw InvalidInput("operator: need N, Q >= 2");
  TruncatedIsospectralOperator op;
  op.matrix.resize(Q + 1, N + 1);
  for (int p = 0; p <= N; ++p)
    op.matrix.col(p) = apply_T_ellipse(EvenFourierMap::mode(p, N, gamma), k_E, Q).u;
  op.provenance = Provenance::EllipseClosedForm;
  op.k_E = k_E;
  op.L_E = 2.0 * kPi / std::sqrt(k_E);
  op.gamma = gamma;
  return op;
}

TruncatedIsospectralOperator domain_operator(const DomainXray& xr, int N, double gamma) {
  if (N < 2) throw InvalidInput("operator: need N >= 2");
  const int Q = xr.q_max();
  TruncatedIsospectralOperator op;
  op.matrix.resize(Q + 1, N + 1);
  const auto& quad = xr.quadrature();
  for (int p = 0; p <= N; ++p) {
    const auto n = EvenFourierMap::mode(p, N, gamma);
    const double a1 = quad.alpha1(n), a2 = quad.alpha2(n);
    op.matrix(0, p) = p == 0 ? 1.0 : 0.0;
    op.matrix(1, p) = 1.0;
    op.matrix(2, p) = p % 2 ? -1.0 : 1.0;
    for (int q = 3; q <= Q; ++q) {
      const double qq = q;
      op.matrix(q, p) = xr.xray_mode(q, p) -
                        (ellipse_multiplier(xr.k_E(), q) + quad.lambda()) * (p == 0 ? 1.0 : 0.0) -
                        a1 / (qq * qq) - a2 / (qq * qq * qq);
    }
  }
  op.provenance = Provenance::DomainNumerical;
  op.k_E = xr.k_E();
  op.L_E = quad.L_E();
  op.gamma = gamma;
  return op;
}

TruncatedIsospectralOperator domain_operator(const AffineCurve& curve, int N, int Q, double gamma) {
  return domain_operator(DomainXray(curve, Q), N, gamma);
}

namespace {

KernelReport analyse(const Eigen::MatrixXd& W, const Eigen::VectorXd& col_weight) {
  KernelReport r;
  const int n = static_cast<int>(W.cols());
  if (W.rows() < n) throw InvalidInput("kernel_analysis: need Q >= N (square or tall matrix)");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  r.sigma_max = s[0];
  r.sigma_min = s[n - 1];
  r.condition = r.sigma_min > 0.0 ? r.sigma_max / r.sigma_min : INFINITY;
  std::vector<int> null;
  for (int i = 0; i < n; ++i)
    if (r.sigma_max == 0.0 || s[i] < kKernelTol * r.sigma_max) null.push_back(i);
  r.kernel_dim = static_cast<int>(null.size());
  r.kernel_basis.resize(n, r.kernel_dim);
  for (int k = 0; k < r.kernel_dim; ++k)
    r.kernel_basis.col(k) = svd.matrixV().col(null[k]).cwiseQuotient(col_weight);
  return r;
}

}  // namespace

KernelReport kernel_analysis(const TruncatedIsospectralOperator& op) {
  Eigen::VectorXd cw(op.N() + 1);
  for (int p = 0; p <= op.N(); ++p) cw[p] = weight(p, op.gamma);
  auto r = analyse(op.weighted(), cw);
  r.q0 = op.q0;
  return r;
}

SplitReport finite_rank_split(const TruncatedIsospectralOperator& op, int q0) {
  const int N = op.N(), Q = op.Q();
  if (q0 < 0 || q0 >= N) throw InvalidInput("finite_rank_split: need 0 <= q0 < N");
  const Eigen::MatrixXd W = op.weighted();
  const int tail = Q - q0 + 1, low = q0 + 1, high = N - q0;
  const Eigen::MatrixXd T1 = W.block(q0, 0, tail, low);
  const Eigen::MatrixXd T2 = W.block(q0, low, tail, high);
  if (tail < high) throw NumericalError("finite_rank_split: tail block has fewer rows than high modes");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(T2, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SplitReport r;
  r.q0 = q0;
  r.tail_sigma_max = svd.singularValues()[0];
  r.tail_sigma_min = svd.singularValues()[high - 1];
  if (!(r.tail_sigma_min > kKernelTol * r.tail_sigma_max))
    throw NumericalError("finite_rank_split: tail block is singular; try a larger q0");
  const Eigen::MatrixXd Fw = -svd.solve(T1);
  const Eigen::MatrixXd M = W.leftCols(low) + W.rightCols(high) * Fw;

  r.F.resize(high, low);
  for (int i = 0; i < high; ++i)
    for (int k = 0; k < low; ++k) r.F(i, k) = Fw(i, k) * weight(k, op.gamma) / weight(q0 + 1 + i, op.gamma);
  Eigen::VectorXd cw(low);
  for (int k = 0; k < low; ++k) cw[k] = weight(k, op.gamma);
  r.assembled = analyse(M, cw);
  r.assembled.q0 = q0;
  r.kernel_dim_bound = q0 + 1;
  return r;
}

EvenFourierMap multiply(const EvenFourierMap& a, const EvenFourierMap& b) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(a.degree() + b.degree() + 1);
  for (int i = 0; i <= a.degree(); ++i)
    for (int j = 0; j <= b.degree(); ++j) {
      const double v = a.coeffs[i] * b.coeffs[j];
      if (v == 0.0) continue;
      if (i == 0 || j == 0) {
        c[i + j] += v;
      } else {
        c[i + j] += 0.5 * v;
        c[std::abs(i - j)] += 0.5 * v;
      }
    }
  return EvenFourierMap(std::move(c), a.gamma);
}

double c_r_norm(const EvenFourierMap& n, int r, int grid) {
  if (grid < 2 * n.degree() + 2) throw InvalidInput("c_r_norm: grid too coarse");
  Eigen::FFT<double> fft;
  double best = 0.0;
  for (int k = 0; k <= r; ++k) {
    std::vector<std::complex<double>> X(grid, 0.0), x;
    if (k == 0) X[0] = n.coefficient(0);
    const std::complex<double> ik = std::pow(std::complex<double>(0.0, 1.0), k);
    for (int p = 1; p <= n.degree(); ++p) {
      const std::complex<double> v = 0.5 * n.coeffs[p] * std::pow(2.0 * kPi * p, k) * ik;
      X[p] += v;
      X[grid - p] += std::conj(v);
    }
    fft.inv(x, X);
    for (const auto& z : x) best = std::max(best, std::abs(z.real()) * grid);
  }
  return best;
}

int BoundSuiteReport::total_violations() const {
  int v = 0;
  for (const auto& c : checks) v += c.violations;
  return v;
}

namespace {

EvenFourierMap random_map(std::mt19937_64& rng, int N, double gamma, bool extremal) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd c(N + 1);
  const double scale = std::exp(3.0 * u(rng));
  for (int p = 0; p <= N; ++p) {
    const double bound = scale * (p == 0 ? 1.0 : std::pow(double(p), -gamma));
    c[p] = extremal ? bound : bound * u(rng);
  }
  return EvenFourierMap(std::move(c), gamma);
}

void record(BoundCheck& chk, double lhs, double rhs, const std::string& what) {
  ++chk.instances;
  chk.max_ratio = std::max(chk.max_ratio, rhs > 0 ? lhs / rhs : (lhs > 0 ? INFINITY : 0.0));
  if (lhs > rhs * (1.0 + 1e-12) + 1e-300) {
    if (chk.violations == 0) chk.witness = what;
    ++chk.violations;
  }
}

}  // namespace

BoundSuiteReport bound_suite(double gamma, int r, int instances, std::uint64_t seed) {
  if (!(gamma > 1.0)) throw InvalidInput("bound_suite: gamma must exceed 1");
  if (!(gamma > r + 1.0)) throw InvalidInput("bound_suite: need gamma > r + 1");
  BoundSuiteReport rep;
  rep.gamma = gamma;
  rep.r = r;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(1, 128), small_deg(1, 48);
  const double zeta = std::riemann_zeta(gamma);
  const double zeta_r = std::riemann_zeta(gamma - r);

  // The stated product constant fails already for alpha = beta = cos(2 pi theta). A valid one
  // follows from (x(1-x))^-g <= 2^(g-1) (x^-g + (1-x)^-g).
  const double c_stated = 2.0 * (zeta + 1.0);
  const double c_valid = 2.0 + (std::pow(2.0, gamma - 1.0) + 1.0) * zeta;
  auto named = [](const char* n) {
    BoundCheck c;
    c.name = n;
    return c;
  };
  BoundCheck d2 = named("cyclic-sum decay"), d3 = named("product algebra"),
             d3v = named("product algebra, corrected constant"), d4 = named("C^r embedding");
  for (int i = 0; i < instances; ++i) {
    const bool extremal = i % 10 == 0;
    {
      const int N = deg(rng);
      const auto F = random_map(rng, N, gamma, extremal);
      const int q = std::uniform_int_distribution<int>(1, N)(rng);
      const double lhs = std::abs(cyclic_sum(F, q).starred);
      std::ostringstream w;
      w << "instance " << i << ": N=" << N << " q=" << q;
      record(d2, lhs, zeta * std::pow(double(q), -gamma) * F.norm(), w.str());
    }
    {
      EvenFourierMap a, b;
      if (i == 0) {
        a = b = EvenFourierMap::mode(1, 1, gamma);
      } else {
        a = random_map(rng, small_deg(rng), gamma, extremal);
        b = random_map(rng, small_deg(rng), gamma, extremal);
      }
      std::ostringstream w;
      w << "instance " << i << ": deg " << a.degree() << " x " << b.degree() << ", |ab| = "
        << multiply(a, b).norm() << ", |a| |b| = " << a.norm() * b.norm();
      const double lhs = multiply(a, b).norm();
      record(d3, lhs, c_stated * a.norm() * b.norm(), w.str());
      record(d3v, lhs, c_valid * a.norm() * b.norm(), w.str());
    }
    {
      const int N = deg(rng);
      const auto n = random_map(rng, N, gamma, extremal);
      std::ostringstream w;
      w << "instance " << i << ": N=" << N;
      record(d4, c_r_norm(n, r, 4096), std::pow(2.0 * kPi, r) * zeta_r * n.norm(), w.str());
    }
  }
  rep.checks = {d2, d3, d4, d3v};
  return rep;
}

}  // namespace sympb
