#include "sympb/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sympb/area_spectrum.hpp"
#include "sympb/billiard_dynamics.hpp"
#include "sympb/deformation_lab.hpp"
#include "sympb/errors.hpp"
#include "sympb/orbit_solver.hpp"
#include "sympb/rigidity_operator.hpp"

namespace sympb {

namespace {

constexpr double kPi = std::numbers::pi;

const char* kTitles[kCriterionCount] = {
    "circle spectrum oracle",
    "affine invariance",
    "asymptotic fit",
    "ellipse equidistribution",
    "chord-weight identity",
    "X-ray closed form",
    "glancing order",
    "orbit asymptotics",
    "action derivative",
    "Mobius inversion",
    "bound suite",
    "operator invertibility",
    "finite-rank split",
};

const char* kSigmaDeviation =
    "unreachable under the stated weighting: the q,p <= 2 block alone has smallest singular value 0.0788";
const char* kProductDeviation =
    "stated product constant 2(zeta+1) is too small; alpha = beta = cos(2 pi theta) already exceeds it";

class Collector {
 public:
  explicit Collector(CriterionResult& r) : r_(r) {}
  void less(const std::string& name, double v, double bound, std::string dev = {}) {
    add(name, v, "<", bound, 0.0, v < bound, std::move(dev));
  }
  void less_eq(const std::string& name, double v, double bound, std::string dev = {}) {
    add(name, v, "<=", bound, 0.0, v <= bound, std::move(dev));
  }
  void greater(const std::string& name, double v, double bound, std::string dev = {}) {
    add(name, v, ">", bound, 0.0, v > bound, std::move(dev));
  }
  void greater_eq(const std::string& name, double v, double bound, std::string dev = {}) {
    add(name, v, ">=", bound, 0.0, v >= bound, std::move(dev));
  }
  void within(const std::string& name, double v, double lo, double hi) {
    add(name, v, "in", lo, hi, v >= lo && v <= hi, {});
  }
  void equal(const std::string& name, double v, double target, std::string dev = {}) {
    add(name, v, "==", target, 0.0, v == target, std::move(dev));
  }
  void info(const std::string& name, double v) { add(name, v, "info", 0.0, 0.0, true, {}); }

 private:
  void add(const std::string& name, double v, const char* rel, double lo, double hi, bool pass,
           std::string dev) {
    if (!std::isfinite(v)) pass = false;
    r_.checks.push_back({name, v, rel, lo, hi, pass, pass ? std::string() : std::move(dev)});
  }
  CriterionResult& r_;
};

ConvexDomainSpec spec(const AcceptanceConfig& c, double a = 1.0, double b = 1.0,
                      std::vector<Harmonic> pert = {}) {
  ConvexDomainSpec s;
  s.a = a;
  s.b = b;
  s.perturbation = std::move(pert);
  s.grid_size = c.grid_size;
  return s;
}

double rel(double v, double ref) { return std::abs(v - ref) / std::abs(ref); }

Eigen::VectorXd random_gamma_coeffs(std::mt19937_64& rng, int N, double gamma) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd c(N + 1);
  for (int p = 0; p <= N; ++p) c[p] = u(rng) * std::pow(double(std::max(p, 1)), -gamma);
  return c;
}

void c1_circle_spectrum(const AcceptanceConfig& cfg, Collector& out) {
  const auto table = spectrum_table(build_domain(spec(cfg)), 128, 3);
  double err = 0.0;
  for (const auto& r : table.rows) err = std::max(err, std::abs(r.action - r.q * std::sin(2.0 * kPi / r.q)));
  out.less("max |A_q - q sin(2 pi/q)|, q in [3,128]", err, 1e-9);
}

void c2_affine_invariance(const AcceptanceConfig& cfg, Collector& out) {
  const auto circle = build_domain(spec(cfg));
  const auto ellipse = build_domain(spec(cfg, 2.0, 0.5));
  const auto tc = spectrum_table(circle, 128, 3), te = spectrum_table(ellipse, 128, 3);
  double rows = 0.0;
  for (size_t i = 0; i < tc.rows.size(); ++i) rows = std::max(rows, std::abs(tc.rows[i].action - te.rows[i].action));
  out.less("max row difference circle vs ellipse(2,0.5)", rows, 1e-9);

  const Eigen::Matrix2d A = Eigen::Vector2d(2.0, 0.5).asDiagonal();
  double mapped = 0.0, points = 0.0;
  for (int q = 3; q <= 128; ++q) {
    const auto oc = max_area_orbit(circle, q), oe = max_area_orbit(ellipse, q);
    double a = 0.0;
    for (int j = 0; j < q; ++j) {
      const Eigen::Vector2d p = A * circle.position(oc.t[j]);
      a += omega(p, A * circle.position(oc.t[(j + 1) % q]));
      points = std::max(points, (p - ellipse.position(oe.t[j])).norm());
    }
    mapped = std::max(mapped, std::abs(a - oe.action));
  }
  out.less("max |A(diag(2,1/2) circle orbit) - ellipse action|", mapped, 1e-9);
  out.info("max distance between mapped and ellipse orbit points", points);
}

void c3_fit(const AcceptanceConfig& cfg, Collector& out) {
  const auto table = spectrum_table(build_domain(spec(cfg)), 128, 16);
  const auto fit = fit_asymptotics(table, 16, 128);
  out.less("c0 relative error vs 2 pi", rel(fit.c0, 2.0 * kPi), 1e-4);
  out.less("c1 relative error vs -4 pi^3/3", rel(fit.c1, -4.0 * std::pow(kPi, 3) / 3.0), 1e-4);
  out.less("c2 relative error vs 4 pi^5/15", rel(fit.c2, 4.0 * std::pow(kPi, 5) / 15.0), 1e-4);
  out.less("kappa relative error vs -2", rel(fit.kappa, -2.0), 1e-4);
  out.less("c1/kappa relative error vs L^3/12", rel(fit.a1_paper, fit.a1_formula), 1e-4);
  out.less("c2/kappa relative error vs -L^4/240 int k", rel(fit.a2_paper, fit.a2_formula), 1e-4);
}

void c4_equidistribution(const AcceptanceConfig& cfg, Collector& out) {
  const auto ellipse = build_domain(spec(cfg, 2.0, 0.5));
  const double L = ellipse.perimeter();
  double err = 0.0;
  for (int q = 3; q <= 64; ++q) {
    const int m = (q - 1) / 2;
    Eigen::VectorXd x(m);
    for (int r = 0; r < m; ++r) x[r] = L * (r + 1) / q + 1e-2;
    OrbitOptions opts;
    opts.initial = x;
    const auto o = max_area_orbit(ellipse, q, opts);
    for (int j = 0; j < q; ++j) err = std::max(err, std::abs(o.t[j] - L * j / q));
  }
  out.less("max |t_j - L j/q| from +1e-2 offset start, q in [3,64]", err, 1e-8);
}

void c5_chord_weights(const AcceptanceConfig& cfg, Collector& out) {
  double err = 0.0;
  for (const auto& [a, b] : {std::pair{2.0, 0.5}, std::pair{1.0, 1.0}, std::pair{3.0, 1.5}}) {
    const auto e = build_domain(spec(cfg, a, b));
    const double k_E = fit_reference_ellipse(e).k_E;
    for (int q = 3; q <= 64; ++q) {
      const auto w = chord_weights(e, max_area_orbit(e, q));
      const double target = 2.0 / std::sqrt(k_E) * std::sin(2.0 * kPi / q);
      err = std::max(err, (w.array() - target).abs().maxCoeff() / target);
    }
  }
  out.less("max relative error, ellipses (2,0.5), (1,1), (3,1.5), q <= 64", err, 1e-8);
}

void c6_xray(const AcceptanceConfig& cfg, Collector& out) {
  const auto e = build_domain(spec(cfg, 2.0, 0.5));
  const double k_E = fit_reference_ellipse(e).k_E;
  double err = 0.0;
  for (int q = 3; q <= 64; ++q) {
    const auto o = max_area_orbit(e, q);
    for (int p : {0, 1, 3, 6}) {
      const auto n = EvenFourierMap::mode(p, std::max(p, 1));
      err = std::max(err, std::abs(xray_transform(e, o, n) - ellipse_multiplier(k_E, q) * cyclic_sum(n, q).value));
    }
  }
  out.less("max |a_{E,q}(n) - mu_q [n]_q|, n in {1, cos 2/6/12 pi theta}", err, 1e-8);
}

void c7_glancing(const AcceptanceConfig& cfg, Collector& out) {
  const auto c = build_domain(spec(cfg, 1.0, 1.0, {{3, 0.01}}));
  constexpr int n = 21;
  Eigen::VectorXd x(n), y(n);
  for (int i = 0; i < n; ++i) {
    const double eps = std::pow(10.0, -3.0 + 2.0 * i / (n - 1));
    x[i] = std::log(eps);
    y[i] = std::log(std::abs(lazutkin_defect(c, 0.3, eps).defect));
  }
  const double xm = x.mean(), ym = y.mean();
  const double slope = ((x.array() - xm) * (y.array() - ym)).sum() / (x.array() - xm).square().sum();
  out.within("log-log slope of the defect, delta_3 = 0.01, eps in [1e-3, 1e-1]", slope, 5.7, 6.3);
  const auto e = build_domain(spec(cfg, 2.0, 0.5));
  out.less("ellipse (2,0.5) defect at eps = 0.1", std::abs(lazutkin_defect(e, 0.3, 0.1).defect), 1e-12);
}

void c8_asymptotics(const AcceptanceConfig& cfg, Collector& out) {
  const auto c = build_domain(spec(cfg, 1.0, 1.0, {{4, 0.01}}));
  const auto a = orbit_asymptotics(c, {32, 64, 128});
  out.greater_eq("a0 residual decrease factor 32 -> 64", a.a0_sup_residual[0] / a.a0_sup_residual[1], 1.7);
  out.greater_eq("a0 residual decrease factor 64 -> 128", a.a0_sup_residual[1] / a.a0_sup_residual[2], 1.7);
  out.less("sup |a0' - b0| on the tabulated profiles", a.a0_derivative_residual, 1e-6);
}

void c9_action_derivative(const AcceptanceConfig& cfg, Collector& out) {
  const auto bump = DeformationFamily::harmonic(spec(cfg), 4);
  double worst = 0.0, halving = 0.0, c_est = 0.0;
  const double h = 1e-3;
  const std::vector<int> bump_qs{4, 8, 16};
  const auto r1 = action_derivative_checks(bump, 0.0, bump_qs, h);
  const auto r2 = action_derivative_checks(bump, 0.0, bump_qs, 0.5 * h);
  for (std::size_t i = 0; i < bump_qs.size(); ++i) {
    const double e1 = r1[i].difference, e2 = r2[i].difference;
    worst = std::max({worst, e1, e2});
    halving = std::max(halving, e2 - 0.25 * e1);
    c_est = std::max(c_est, e1 / (h * h));
  }
  // Below 1e-6 outright, so below 1e-6 + C h^2 for any C >= 0.
  out.less("bump family: max |FD - X-ray|, h in {1e-3, 5e-4}, q in {4,8,16}", worst, 1e-6);
  out.less("bump family: err(h/2) - err(h)/4", halving, 1e-6);
  out.info("bump family: err(1e-3)/h^2", c_est);
  const auto squeeze = DeformationFamily::squeeze(spec(cfg));
  double sq = 0.0;
  std::vector<int> sq_qs;
  for (int q = 3; q <= 32; ++q) sq_qs.push_back(q);
  for (const auto& r : action_derivative_checks(squeeze, 0.0, sq_qs)) {
    sq = std::max({sq, std::abs(r.finite_difference), std::abs(r.xray)});
  }
  out.less("squeeze family of the circle: max of both sides, q in [3,32]", sq, 1e-8);
}

void c10_mobius(const AcceptanceConfig& cfg, Collector& out) {
  std::mt19937_64 rng(20240611u);
  double e1 = 0.0, e2 = 0.0;
  for (int i = 0; i < 100; ++i) {
    const EvenFourierMap n(random_gamma_coeffs(rng, 128, cfg.gamma), cfg.gamma);
    e1 = std::max(e1, (invert_T_ellipse(apply_T_ellipse(n, 1.0, 128), 1.0, 128).coeffs - n.coeffs).cwiseAbs().maxCoeff());
    const GammaSequence u(random_gamma_coeffs(rng, 128, cfg.gamma), cfg.gamma);
    e2 = std::max(e2, (apply_T_ellipse(invert_T_ellipse(u, 1.0, 128), 1.0, 128).u - u.u).cwiseAbs().maxCoeff());
  }
  out.less("invert(apply(n)) max coefficient error", e1, 1e-12);
  out.less("apply(invert(u)) max coefficient error", e2, 1e-12);
  out.equal("first k <= 1e4 violating sum_{d|k} mu(d) = [k = 1] (0 = none)",
            double(mobius_identity_failure(10000)), 0.0);
}

void c11_bounds(const AcceptanceConfig& cfg, Collector& out) {
  const auto rep = bound_suite(cfg.gamma, 2, 1000);
  for (const auto& c : rep.checks) {
    out.equal(c.name + " violations", double(c.violations), 0.0,
              c.name == "product algebra" ? kProductDeviation : "");
    out.info(c.name + " max ratio", c.max_ratio);
  }
}

void c12_operator(const AcceptanceConfig& cfg, Collector& out) {
  constexpr int N = 64;
  const auto kE = kernel_analysis(ellipse_operator(1.0, N, N, cfg.gamma));
  out.greater("sigma_min of weighted T_E (k_E = 1, N = Q = 64)", kE.sigma_min, 0.1, kSigmaDeviation);
  out.equal("kernel dimension of T_E", kE.kernel_dim, 0.0);

  // q^gamma |T_Omega(n)_q - T_E(n)_q| against the reference ellipse of each domain, sup over q.
  const int tests[] = {3, 5, 8};
  std::vector<double> diff[2];
  const double deltas[] = {1e-3, 1e-2};
  for (int i = 0; i < 2; ++i) {
    const auto c = build_domain(spec(cfg, 1.0, 1.0, {{4, deltas[i]}}));
    const DomainXray xr(c, N);
    const auto op = domain_operator(xr, N, cfg.gamma);
    const auto k = kernel_analysis(op);
    std::ostringstream tag;
    tag << "delta_4 = " << deltas[i];
    out.less("|sigma_min(T_Omega)/sigma_min(T_E) - 1|, " + tag.str(), std::abs(k.sigma_min / kE.sigma_min - 1.0),
             0.25);
    out.equal("kernel dimension of T_Omega, " + tag.str(), k.kernel_dim, 0.0);
    const auto ref = ellipse_operator(op.k_E, N, N, cfg.gamma);
    for (int p : tests) {
      double d = 0.0;
      for (int q = 3; q <= N; ++q) d = std::max(d, std::pow(q, cfg.gamma) * std::abs(op.matrix(q, p) - ref.matrix(q, p)));
      diff[i].push_back(d);
    }
  }
  for (size_t t = 0; t < std::size(tests); ++t) {
    const std::string n = "n = cos(2 pi " + std::to_string(tests[t]) + " theta)";
    out.info("sup_q q^gamma |T_Omega(n)_q - T_E(n)_q|, delta 1e-3, " + n, diff[0][t]);
    out.less("ratio of weighted differences delta 1e-3 / 1e-2, " + n, diff[0][t] / diff[1][t], 1.0);
  }
}

void c13_split(const AcceptanceConfig& cfg, Collector& out) {
  const auto c = build_domain(spec(cfg, 1.0, 1.0, {{4, 1e-2}}));
  const auto op = domain_operator(c, 64, 64, cfg.gamma);
  const auto s = finite_rank_split(op, 8);
  out.greater("tail block sigma_min / sigma_max", s.tail_sigma_min / s.tail_sigma_max, 1e-8);
  out.equal("F entries finite (1 = yes)", s.F.allFinite() ? 1.0 : 0.0, 1.0);
  out.equal("assembled kernel dimension", s.assembled.kernel_dim, 0.0);
  out.less_eq("kernel dimension against bound q0 + 1", s.assembled.kernel_dim, s.kernel_dim_bound);
  out.info("kernel dimension bound q0 + 1", s.kernel_dim_bound);
}

using Runner = void (*)(const AcceptanceConfig&, Collector&);
constexpr Runner kRunners[kCriterionCount] = {
    c1_circle_spectrum, c2_affine_invariance, c3_fit,     c4_equidistribution, c5_chord_weights,
    c6_xray,            c7_glancing,          c8_asymptotics, c9_action_derivative, c10_mobius,
    c11_bounds,         c12_operator,         c13_split,
};

std::string describe(const AcceptanceCheck& c) {
  std::ostringstream os;
  os.precision(3);
  os << c.name << " = " << c.value;
  if (c.relation == "in")
    os << " in [" << c.bound << ", " << c.bound_hi << "]";
  else if (c.relation != "info")
    os << " " << c.relation << " " << c.bound;
  return os.str();
}

}  // namespace

void AcceptanceConfig::validate() const {
  ConvexDomainSpec s;
  s.grid_size = grid_size;
  s.validate();
  if (!(gamma > 3.0 && gamma < 4.0)) throw InvalidInput("gamma must lie in (3, 4)");
}

bool CriterionResult::pass() const {
  if (!error.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
}

bool CriterionResult::documented_failure() const {
  if (pass() || !error.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass || !c.deviation.empty(); });
}

std::string CriterionResult::summary() const {
  std::ostringstream os;
  os << (pass() ? "[PASS] " : "[FAIL] ") << id << " " << title << ": ";
  if (!error.empty()) {
    os << "error: " << error;
    return os.str();
  }
  std::vector<const AcceptanceCheck*> shown;
  for (const auto& c : checks)
    if (!c.pass) shown.push_back(&c);
  if (shown.empty())
    for (const auto& c : checks)
      if (c.relation != "info") shown.push_back(&c);
  for (size_t i = 0; i < shown.size(); ++i) {
    if (i) os << "; ";
    os << describe(*shown[i]);
    if (!shown[i]->deviation.empty()) os << " (known deviation: " << shown[i]->deviation << ")";
  }
  return os.str();
}

CriterionResult run_criterion(int id, const AcceptanceConfig& config) {
  if (id < 1 || id > kCriterionCount) throw InvalidInput("no acceptance criterion " + std::to_string(id));
  config.validate();
  CriterionResult r;
  r.id = id;
  r.title = kTitles[id - 1];
  const auto t0 = std::chrono::steady_clock::now();
  Collector out(r);
  try {
    kRunners[id - 1](config, out);
  } catch (const Error& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config) {
  config.validate();
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, config));
  return out;
}

Json acceptance_report(const AcceptanceConfig& config, const std::vector<CriterionResult>& results) {
  Json j = report_header("verify");
  j["config"] = {{"grid_size", config.grid_size}, {"gamma", config.gamma}};
  j["criteria"] = Json::array();
  Json failed = Json::array();
  for (const auto& r : results) {
    Json c;
    c["id"] = r.id;
    c["title"] = r.title;
    c["pass"] = r.pass();
    c["documented_failure"] = r.documented_failure();
    if (!r.error.empty()) c["error"] = r.error;
    c["checks"] = Json::array();
    for (const auto& k : r.checks) {
      Json e;
      e["name"] = k.name;
      e["value"] = k.value;
      e["relation"] = k.relation;
      if (k.relation != "info") e["bound"] = k.bound;
      if (k.relation == "in") e["bound_hi"] = k.bound_hi;
      e["pass"] = k.pass;
      if (!k.deviation.empty()) e["deviation"] = k.deviation;
      c["checks"].push_back(std::move(e));
    }
    if (!r.pass()) failed.push_back(r.id);
    j["criteria"].push_back(std::move(c));
  }
  j["failed"] = failed;
  j["all_pass"] = failed.empty();
  return j;
}

}  // namespace sympb
