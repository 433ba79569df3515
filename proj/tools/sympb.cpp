// sympb: batch front end for domains, orbits, area spectra, X-ray transforms, linearised
// isospectral operators and deformation families.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "sympb/acceptance.hpp"
#include "sympb/area_spectrum.hpp"
#include "sympb/deformation_lab.hpp"
#include "sympb/errors.hpp"
#include "sympb/io.hpp"
#include "sympb/orbit_solver.hpp"
#include "sympb/rigidity_operator.hpp"

using namespace sympb;

namespace {

enum Exit { kOk = 0, kAcceptanceFailure = 1, kInvalidInput = 2, kNumericalFailure = 3 };

struct Options {
  std::string spec;
  int q_min = 3;
  int q_max = 64;
  int q = 8;
  double gamma = kDefaultGamma;
  std::optional<int> grid;
  std::string out = "-";
  std::string report;
  std::string format = "json";
  bool asymptotics = false;
  bool no_fit = false;
  int mode = 1;
  int n_modes = -1;
  double k_e = 1.0;
  std::optional<int> q0;
  double tau = 0.0;
  double h = kDefaultDeformationStep;
  bool rank_one = false;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path);
    if (!file_) throw InvalidInput("cannot write " + path);
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit(const Options& o, const CsvTable& table, Json report) {
  if (!o.report.empty()) {
    Output r(o.report);
    write_json(r.stream(), report);
  }
  Output out(o.out);
  if (o.format == "csv") {
    write_csv(out.stream(), table);
  } else {
    report["table"] = to_json(table);
    write_json(out.stream(), report);
  }
}

void require_spec(const Options& o) {
  if (o.spec.empty()) throw InvalidInput("--spec is required");
}

void require_gamma(const Options& o) {
  if (!(o.gamma > 3.0 && o.gamma < 4.0)) throw InvalidInput("--gamma must lie in (3, 4)");
}

void require_q_range(const Options& o) {
  if (o.q_min < 2 || o.q_max < o.q_min) throw InvalidInput("need q_max >= q_min >= 2");
}

ConvexDomainSpec domain_input(const Options& o) {
  require_spec(o);
  auto s = load_domain_spec(o.spec);
  if (o.grid) {
    s.grid_size = *o.grid;
    s.validate();
  }
  return s;
}

int cmd_domain(const Options& o) {
  const auto curve = build_domain(domain_input(o));
  auto report = domain_report(curve);
  std::cerr << "L = " << format_double(curve.perimeter()) << "\nk in ["
            << format_double(report["k_min"].get<double>()) << ", " << format_double(report["k_max"].get<double>())
            << "]\ndelta_hat = " << format_double(report["delta_hat"].get<double>()) << "\n";
  emit(o, curve_csv(curve), std::move(report));
  return kOk;
}

int cmd_orbit(const Options& o) {
  const auto curve = build_domain(domain_input(o));
  if (o.q < 2) throw InvalidInput("--q must be >= 2");
  const auto orbit = max_area_orbit(curve, o.q);
  Json report = report_header(o.asymptotics ? "orbit-asymptotics" : "orbit");
  report["orbit"] = to_json(orbit);
  if (!o.asymptotics) {
    emit(o, orbit_csv(curve, orbit), std::move(report));
    return kOk;
  }
  const auto a = orbit_asymptotics(curve, {o.q, 2 * o.q, 4 * o.q});
  report["asymptotics"] = to_json(a);
  emit(o, asymptotics_csv(a), std::move(report));
  return kOk;
}

int cmd_spectrum(const Options& o) {
  require_q_range(o);
  const auto curve = build_domain(domain_input(o));
  const bool fit = !o.no_fit;
  const int fit_min = std::max(o.q_min, 3);
  if (fit && o.q_max < 4 * fit_min) throw InvalidInput("fit range rejected: need q_max >= 4 q_min (or --no-fit)");
  const auto table = spectrum_table(curve, o.q_max, o.q_min);
  Json report = report_header("spectrum");
  report["domain"] = table.domain;
  report["perimeter"] = table.perimeter;
  report["enclosed_area"] = table.enclosed_area;
  if (fit) {
    const auto f = fit_asymptotics(table, fit_min, o.q_max);
    report["fit"] = to_json(f);
    std::cerr << "c0 = " << format_double(f.c0) << "\nc1 = " << format_double(f.c1)
              << "\nc2 = " << format_double(f.c2) << "\nkappa = " << format_double(f.kappa) << "\n";
  }
  emit(o, spectrum_csv(table), std::move(report));
  return kOk;
}

int cmd_xray(const Options& o) {
  require_q_range(o);
  if (o.mode < 0) throw InvalidInput("--mode must be >= 0");
  const int q_min = std::max(o.q_min, 3);
  const auto curve = build_domain(domain_input(o));
  const auto n = EvenFourierMap::mode(o.mode, std::max(o.mode, 1));
  const double k_E = fit_reference_ellipse(curve).k_E;
  CsvTable t{{"q", "xray", "ellipse_closed_form", "difference"}, {}};
  const DomainXray xr(curve, o.q_max);
  for (int q = q_min; q <= o.q_max; ++q) {
    const double a = xr.xray(q, n), e = ellipse_multiplier(k_E, q) * cyclic_sum(n, q).value;
    t.rows.push_back({std::int64_t(q), a, e, a - e});
  }
  Json report = report_header("xray");
  report["mode"] = o.mode;
  report["k_E"] = k_E;
  emit(o, t, std::move(report));
  return kOk;
}

int cmd_operator(const Options& o) {
  require_gamma(o);
  if (o.q_max < 2) throw InvalidInput("--q-max must be >= 2");
  const int N = o.n_modes < 0 ? o.q_max : o.n_modes;
  if (N > o.q_max) throw InvalidInput("--modes must not exceed --q-max");
  if (o.spec.empty() && !(o.k_e > 0.0)) throw InvalidInput("--k-e must be positive");
  const auto op = o.spec.empty() ? ellipse_operator(o.k_e, N, o.q_max, o.gamma)
                                 : domain_operator(build_domain(domain_input(o)), N, o.q_max, o.gamma);
  Json report = report_header("operator");
  report["provenance"] = op.provenance == Provenance::EllipseClosedForm ? "ellipse-closed-form" : "domain-numerical";
  report["N"] = op.N();
  report["Q"] = op.Q();
  report["gamma"] = op.gamma;
  report["k_E"] = op.k_E;
  report["L_E"] = op.L_E;
  const auto k = kernel_analysis(op);
  report["kernel"] = to_json(k);
  std::cerr << "sigma_min = " << format_double(k.sigma_min) << "\nkernel_dim = " << k.kernel_dim << "\n";
  if (o.q0) report["split"] = to_json(finite_rank_split(op, *o.q0));
  emit(o, operator_csv(op), std::move(report));
  return kOk;
}

int cmd_deform(const Options& o) {
  require_spec(o);
  require_q_range(o);
  auto family = load_family(o.spec);
  if (o.grid) {
    family.base.grid_size = *o.grid;
    family.validate();
  }
  const auto dm = deformation_map(family, o.tau, o.h);
  Json report = report_header("deform");
  report["family"] = to_json(family);
  report["deformation_map"] = to_json(dm);
  report["action_checks"] = Json::array();
  std::vector<int> qs;
  for (int q = std::max(o.q_min, 3); q <= o.q_max; ++q) qs.push_back(q);
  for (const auto& c : action_derivative_checks(family, o.tau, qs, o.h)) report["action_checks"].push_back(to_json(c));
  const auto iso = isospectral_residuals(family, o.tau, o.q_max, o.h);
  report["isospectral"] = to_json(iso);
  if (o.rank_one) report["rank_one"] = to_json(rank_one_check(family));
  std::cerr << "odd_residual = " << format_double(dm.odd_residual)
            << "\nisospectral_consistent = " << (iso.consistent ? "true" : "false") << "\n";
  emit(o, coefficients_csv(dm.n), std::move(report));
  return kOk;
}

int cmd_verify(const Options& o) {
  require_gamma(o);
  AcceptanceConfig cfg;
  if (o.grid) cfg.grid_size = *o.grid;
  cfg.gamma = o.gamma;
  cfg.validate();
  const auto results = run_acceptance(cfg);
  std::ostringstream failed;
  for (const auto& r : results) {
    std::cerr << r.summary() << "\n";
    if (!r.pass()) failed << (failed.tellp() > 0 ? ", " : "") << r.id;
  }
  Output out(o.out);
  write_json(out.stream(), acceptance_report(cfg, results));
  if (failed.tellp() > 0) {
    std::cerr << "failed criteria: " << failed.str() << "\n";
    return kAcceptanceFailure;
  }
  return kOk;
}

void add_output(CLI::App* c, Options& o) {
  c->add_option("--out", o.out, "output path ('-' for stdout)");
  c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  c->add_option("--report", o.report, "also write the JSON report here");
}

void add_domain(CLI::App* c, Options& o) {
  c->add_option("--spec", o.spec, "domain spec JSON");
  c->add_option("--grid", o.grid, "override the spec grid size");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sympb: symplectic billiard area spectra and linearised rigidity experiments"};
  app.require_subcommand(1);
  Options o;

  auto* domain = app.add_subcommand("domain", "build a domain and report its affine geometry");
  add_domain(domain, o);
  add_output(domain, o);

  auto* orbit = app.add_subcommand("orbit", "maximal symmetric q-periodic orbit");
  add_domain(orbit, o);
  add_output(orbit, o);
  orbit->add_option("--q", o.q, "rotation number denominator");
  orbit->add_flag("--asymptotics", o.asymptotics, "fit orbit corrections over q, 2q, 4q");

  auto* spectrum = app.add_subcommand("spectrum", "area spectrum table and asymptotic fit");
  add_domain(spectrum, o);
  add_output(spectrum, o);
  spectrum->add_option("--q-min", o.q_min, "smallest q");
  spectrum->add_option("--q-max", o.q_max, "largest q");
  spectrum->add_flag("--no-fit", o.no_fit, "table only");

  auto* xray = app.add_subcommand("xray", "discrete X-ray transform of cos(2 pi p theta)");
  add_domain(xray, o);
  add_output(xray, o);
  xray->add_option("--q-min", o.q_min, "smallest q");
  xray->add_option("--q-max", o.q_max, "largest q");
  xray->add_option("--mode", o.mode, "Fourier mode p");

  auto* op = app.add_subcommand("operator", "truncated linear isospectral operator and its kernel");
  add_domain(op, o);
  add_output(op, o);
  op->add_option("--q-max", o.q_max, "rows Q");
  op->add_option("--modes", o.n_modes, "columns N (default Q)");
  op->add_option("--gamma", o.gamma, "regularity exponent in (3, 4)");
  op->add_option("--k-e", o.k_e, "ellipse curvature when no --spec is given");
  op->add_option("--q0", o.q0, "finite-rank split index");

  auto* deform = app.add_subcommand("deform", "deformation map and isospectral residuals of a family");
  deform->add_option("--spec", o.spec, "family spec JSON");
  deform->add_option("--grid", o.grid, "override the base grid size");
  add_output(deform, o);
  deform->add_option("--q-min", o.q_min, "smallest q");
  deform->add_option("--q-max", o.q_max, "largest q");
  deform->add_option("--tau", o.tau, "family parameter");
  deform->add_option("--step", o.h, "central-difference step h");
  deform->add_flag("--rank-one", o.rank_one, "also sample the family for the rank-one check");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--grid", o.grid, "grid size for every domain");
  verify->add_option("--gamma", o.gamma, "regularity exponent in (3, 4)");
  verify->add_option("--out", o.out, "JSON summary path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  try {
    if (*domain) return cmd_domain(o);
    if (*orbit) return cmd_orbit(o);
    if (*spectrum) return cmd_spectrum(o);
    if (*xray) return cmd_xray(o);
    if (*op) return cmd_operator(o);
    if (*deform) return cmd_deform(o);
    if (*verify) return cmd_verify(o);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kInvalidInput;
}
