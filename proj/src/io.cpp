#include "sympb/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "sympb/errors.hpp"

namespace sympb {

namespace {

void require_keys(const Json& j, std::string_view what, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw InvalidInput(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidInput(std::string(what) + ": unknown key \"" + key + "\"");
  }
}

double get_number(const Json& j, const char* key, std::string_view what) {
  if (!j.contains(key)) throw InvalidInput(std::string(what) + ": missing \"" + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number()) throw InvalidInput(std::string(what) + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

int get_int(const Json& j, const char* key, std::string_view what) {
  if (!j.contains(key)) throw InvalidInput(std::string(what) + ": missing \"" + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw InvalidInput(std::string(what) + ": \"" + key + "\" must be an integer");
  const auto x = v.get<std::int64_t>();
  if (x < -(1LL << 30) || x > (1LL << 30)) throw InvalidInput(std::string(what) + ": \"" + key + "\" out of range");
  return static_cast<int>(x);
}

bool scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void emit(std::ostream& os, const Json& j, int indent, int level) {
  const std::string pad(indent * (level + 1), ' '), close(indent * level, ' ');
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_double(v) : "null");
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      bool flat = true;
      for (const auto& e : j) flat = flat && scalar(e);
      os << '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ',';
        if (flat) {
          if (!first && indent > 0) os << ' ';
        } else {
          os << nl << pad;
        }
        emit(os, e, indent, level + 1);
        first = false;
      }
      if (!flat) os << nl << close;
      os << ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ',';
        os << nl << pad << Json(k).dump() << sep;
        emit(os, v, indent, level + 1);
        first = false;
      }
      os << nl << close << '}';
      return;
    }
    default:
      os << j.dump();
  }
}

Json vec(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json vec(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

ConvexDomainSpec parse_domain_spec(const Json& j) {
  constexpr std::string_view what = "domain spec";
  require_keys(j, what, {"a", "b", "perturbation", "grid_size"});
  ConvexDomainSpec s;
  s.a = get_number(j, "a", what);
  s.b = get_number(j, "b", what);
  if (j.contains("grid_size")) s.grid_size = get_int(j, "grid_size", what);
  if (j.contains("perturbation")) {
    const auto& p = j.at("perturbation");
    if (!p.is_array()) throw InvalidInput("domain spec: \"perturbation\" must be an array");
    for (const auto& h : p) {
      require_keys(h, "perturbation entry", {"j", "delta"});
      s.perturbation.push_back({get_int(h, "j", "perturbation entry"), get_number(h, "delta", "perturbation entry")});
    }
  }
  s.validate();
  return s;
}

ConvexDomainSpec load_domain_spec(const std::string& path) { return parse_domain_spec(load_json_file(path)); }

Json to_json(const ConvexDomainSpec& s) {
  Json j;
  j["a"] = s.a;
  j["b"] = s.b;
  j["perturbation"] = Json::array();
  for (const auto& h : s.perturbation) j["perturbation"].push_back({{"j", h.j}, {"delta", h.delta}});
  j["grid_size"] = s.grid_size;
  return j;
}

DeformationFamily parse_family(const Json& j) {
  constexpr std::string_view what = "family spec";
  require_keys(j, what, {"base", "path", "affine", "normalization", "interval"});
  if (!j.contains("base")) throw InvalidInput("family spec: missing \"base\"");
  DeformationFamily f;
  f.base = parse_domain_spec(j.at("base"));
  if (j.contains("path")) {
    const auto& p = j.at("path");
    if (!p.is_array()) throw InvalidInput("family spec: \"path\" must be an array");
    for (const auto& r : p) {
      require_keys(r, "path entry", {"j", "delta_dot"});
      f.path.push_back({get_int(r, "j", "path entry"), get_number(r, "delta_dot", "path entry")});
    }
  }
  if (j.contains("affine")) {
    const auto& a = j.at("affine");
    if (!a.is_array() || a.size() != 2 || !a[0].is_array() || !a[1].is_array() || a[0].size() != 2 ||
        a[1].size() != 2)
      throw InvalidInput("family spec: \"affine\" must be a 2x2 array");
    Eigen::Matrix2d X;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        if (!a[r][c].is_number()) throw InvalidInput("family spec: \"affine\" entries must be numbers");
        X(r, c) = a[r][c].get<double>();
      }
    f.affine = X;
  }
  f.normalization = f.affine ? Normalization::Raw : Normalization::FixedPoints;
  if (j.contains("normalization")) {
    const auto& n = j.at("normalization");
    if (n == "fixed-points")
      f.normalization = Normalization::FixedPoints;
    else if (n == "raw")
      f.normalization = Normalization::Raw;
    else
      throw InvalidInput("family spec: normalization must be \"fixed-points\" or \"raw\"");
  }
  if (j.contains("interval")) {
    const auto& i = j.at("interval");
    if (!i.is_array() || i.size() != 2 || !i[0].is_number() || !i[1].is_number())
      throw InvalidInput("family spec: \"interval\" must be [lo, hi]");
    f.tau_min = i[0].get<double>();
    f.tau_max = i[1].get<double>();
  }
  f.validate();
  return f;
}

DeformationFamily load_family(const std::string& path) { return parse_family(load_json_file(path)); }

Json to_json(const DeformationFamily& f) {
  Json j;
  j["base"] = to_json(f.base);
  j["path"] = Json::array();
  for (const auto& r : f.path) j["path"].push_back({{"j", r.j}, {"delta_dot", r.delta_dot}});
  if (f.affine) {
    const auto& X = *f.affine;
    j["affine"] = {{X(0, 0), X(0, 1)}, {X(1, 0), X(1, 1)}};
  }
  j["normalization"] = f.normalization == Normalization::Raw ? "raw" : "fixed-points";
  j["interval"] = {f.tau_min, f.tau_max};
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(std::ostream& os, const Json& j, int indent) {
  emit(os, j, indent, 0);
  os << '\n';
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent);
  return os.str();
}

Json report_header(std::string_view kind) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["kind"] = std::string(kind);
  return j;
}

void write_csv(std::ostream& os, const CsvTable& t) {
  for (size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              os << format_double(v);
            else
              os << v;
          },
          row[i]);
    }
    os << '\n';
  }
}

Json to_json(const CsvTable& t) {
  Json j;
  j["columns"] = t.header;
  j["rows"] = Json::array();
  for (const auto& row : t.rows) {
    Json r = Json::array();
    for (const auto& c : row) std::visit([&](const auto& v) { r.push_back(v); }, c);
    j["rows"].push_back(std::move(r));
  }
  return j;
}

CsvTable curve_csv(const AffineCurve& c) {
  CsvTable t{{"t", "x", "y", "rho", "k"}, {}};
  for (int i = 0; i < c.grid_size(); ++i)
    t.rows.push_back({c.t_table()[i], c.position_table()(0, i), c.position_table()(1, i), c.rho_table()[i],
                      c.curvature_table()[i]});
  return t;
}

CsvTable orbit_csv(const AffineCurve& c, const SymmetricOrbit& o) {
  CsvTable t{{"q", "j", "t", "x", "y", "eps"}, {}};
  for (int j = 0; j < o.q; ++j) {
    const auto p = c.position(o.t[j]);
    t.rows.push_back({std::int64_t(o.q), std::int64_t(j), o.t[j], p.x(), p.y(), o.gaps[j]});
  }
  return t;
}

CsvTable asymptotics_csv(const OrbitAsymptotics& a) {
  CsvTable t{{"theta", "a0_closed", "a0_empirical", "a1_closed", "a1_literal", "a1_empirical", "b0_closed",
              "b0_empirical", "b1_closed", "b1_literal", "b1_empirical"},
             {}};
  for (Eigen::Index i = 0; i < a.theta.size(); ++i)
    t.rows.push_back({a.theta[i], a.a0_closed[i], a.a0_empirical[i], a.a1_closed[i], a.a1_literal[i],
                      a.a1_empirical[i], a.b0_closed[i], a.b0_empirical[i], a.b1_closed[i], a.b1_literal[i],
                      a.b1_empirical[i]});
  return t;
}

CsvTable spectrum_csv(const SpectrumTable& s) {
  CsvTable t{{"q", "A_q", "residual"}, {}};
  for (const auto& r : s.rows) t.rows.push_back({std::int64_t(r.q), r.action, r.residual});
  return t;
}

CsvTable operator_csv(const TruncatedIsospectralOperator& op) {
  CsvTable t;
  t.header.push_back("q");
  for (int p = 0; p <= op.N(); ++p) t.header.push_back("p" + std::to_string(p));
  for (int q = 0; q <= op.Q(); ++q) {
    std::vector<CsvTable::Cell> row{std::int64_t(q)};
    for (int p = 0; p <= op.N(); ++p) row.emplace_back(op.matrix(q, p));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable coefficients_csv(const EvenFourierMap& n) {
  CsvTable t{{"p", "c_p"}, {}};
  for (int p = 0; p <= n.degree(); ++p) t.rows.push_back({std::int64_t(p), n.coeffs[p]});
  return t;
}

Json domain_report(const AffineCurve& c) {
  Json j = report_header("domain");
  if (c.source()) {
    j["domain"] = c.source()->identifier();
    j["spec"] = to_json(*c.source());
  }
  const auto ref = fit_reference_ellipse(c);
  const auto conic = detect_conic(c);
  j["perimeter"] = c.perimeter();
  j["grid_size"] = c.grid_size();
  j["k_min"] = c.curvature_table().minCoeff();
  j["k_max"] = c.curvature_table().maxCoeff();
  j["k_mean"] = c.curvature_mean();
  j["k_E"] = ref.k_E;
  j["L_E"] = ref.L_E;
  j["delta_hat"] = ref.delta_hat;
  j["is_ellipse"] = conic.is_ellipse;
  j["enclosed_area"] = c.enclosed_area();
  j["mirror_symmetric"] = c.mirror_symmetric();
  const auto& r = c.residuals();
  j["residuals"] = {{"unimodularity", r.unimodularity},
                    {"structure", r.structure},
                    {"speed", r.speed},
                    {"symmetry", r.symmetry}};
  return j;
}

Json to_json(const SymmetricOrbit& o) {
  Json j;
  j["q"] = o.q;
  j["action"] = o.action;
  j["residual"] = o.residual;
  j["gap_constant"] = o.gap_constant;
  j["gap_ratio"] = o.gap_ratio();
  j["newton_iterations"] = o.newton_iterations;
  j["gradient_iterations"] = o.gradient_iterations;
  j["t"] = vec(o.t);
  j["gaps"] = vec(o.gaps);
  return j;
}

Json to_json(const OrbitAsymptotics& a) {
  Json j;
  j["qs"] = a.qs;
  j["a0_sup_residual"] = vec(a.a0_sup_residual);
  j["b0_sup_residual"] = vec(a.b0_sup_residual);
  Json ratios = Json::array();
  for (size_t i = 1; i < a.a0_sup_residual.size(); ++i)
    ratios.push_back(a.a0_sup_residual[i - 1] / a.a0_sup_residual[i]);
  j["a0_decrease_factors"] = ratios;
  j["a0_derivative_residual"] = a.a0_derivative_residual;
  j["a0_derivative_residual_empirical"] = a.a0_derivative_residual_empirical;
  return j;
}

Json to_json(const AsymptoticFit& f) {
  Json j;
  j["q_min"] = f.q_min;
  j["q_max"] = f.q_max;
  j["c0"] = f.c0;
  j["c1"] = f.c1;
  j["c2"] = f.c2;
  j["c3"] = f.c3;
  j["kappa"] = f.kappa;
  j["a1_paper"] = f.a1_paper;
  j["a2_paper"] = f.a2_paper;
  j["a1_formula"] = f.a1_formula;
  j["a2_formula"] = f.a2_formula;
  j["residual"] = f.residual;
  j["condition"] = f.condition;
  j["twice_area"] = f.twice_area;
  return j;
}

Json to_json(const KernelReport& k) {
  Json j;
  j["sigma_min"] = k.sigma_min;
  j["sigma_max"] = k.sigma_max;
  j["condition"] = k.condition;
  j["kernel_dim"] = k.kernel_dim;
  j["q0"] = k.q0 ? Json(*k.q0) : Json(nullptr);
  return j;
}

Json to_json(const SplitReport& s) {
  Json j;
  j["q0"] = s.q0;
  j["tail_sigma_min"] = s.tail_sigma_min;
  j["tail_sigma_max"] = s.tail_sigma_max;
  j["F_rows"] = static_cast<int>(s.F.rows());
  j["F_cols"] = static_cast<int>(s.F.cols());
  j["F_max_abs"] = s.F.size() ? s.F.cwiseAbs().maxCoeff() : 0.0;
  j["assembled"] = to_json(s.assembled);
  j["kernel_dim_bound"] = s.kernel_dim_bound;
  return j;
}

Json to_json(const BoundSuiteReport& b) {
  Json j;
  j["gamma"] = b.gamma;
  j["r"] = b.r;
  j["checks"] = Json::array();
  for (const auto& c : b.checks)
    j["checks"].push_back({{"name", c.name},
                           {"instances", c.instances},
                           {"violations", c.violations},
                           {"max_ratio", c.max_ratio},
                           {"witness", c.witness}});
  return j;
}

Json to_json(const DeformationMap& d) {
  Json j;
  j["tau"] = d.tau;
  j["h"] = d.h;
  j["degree"] = d.n.degree();
  j["coefficients"] = vec(d.n.coeffs);
  j["odd_residual"] = d.odd_residual;
  j["truncation"] = d.truncation;
  j["richardson_change"] = d.richardson_change;
  j["order"] = d.order;
  j["L_minus"] = d.L_minus;
  j["L_plus"] = d.L_plus;
  return j;
}

Json to_json(const ActionDerivativeCheck& c) {
  return {{"q", c.q}, {"finite_difference", c.finite_difference}, {"xray", c.xray}, {"difference", c.difference}};
}

Json to_json(const IsospectralReport& r) {
  Json j;
  j["tau"] = r.tau;
  j["n_hat0"] = r.n_hat0;
  j["odd_residual"] = r.odd_residual;
  j["alpha1"] = r.alpha1;
  j["alpha2"] = r.alpha2;
  j["length_change"] = r.length_change;
  j["n_at_0"] = r.n_at_0;
  j["n_at_half"] = r.n_at_half;
  j["max_xray"] = r.max_xray;
  j["consistent"] = r.consistent;
  j["xray"] = Json::array();
  for (size_t i = 0; i < r.qs.size(); ++i) j["xray"].push_back({{"q", r.qs[i]}, {"value", r.xray[i]}});
  return j;
}

Json to_json(const RankOneReport& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["taus"] = vec(r.taus);
  j["max_n"] = r.max_n;
  j["max_distance"] = r.max_distance;
  return j;
}

}  // namespace sympb
