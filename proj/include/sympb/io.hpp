#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sympb/area_spectrum.hpp"
#include "sympb/curve_geometry.hpp"
#include "sympb/deformation_lab.hpp"
#include "sympb/orbit_solver.hpp"
#include "sympb/rigidity_operator.hpp"

namespace sympb {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Input documents. Unknown keys and wrong types raise InvalidInput.
Json load_json_file(const std::string& path);
ConvexDomainSpec parse_domain_spec(const Json& j);
ConvexDomainSpec load_domain_spec(const std::string& path);
Json to_json(const ConvexDomainSpec& spec);
DeformationFamily parse_family(const Json& j);
DeformationFamily load_family(const std::string& path);
Json to_json(const DeformationFamily& family);

// Output. Doubles are printed with 17 significant digits; non-finite values become null in
// JSON and nan/inf in CSV.
std::string format_double(double v);
void write_json(std::ostream& os, const Json& j, int indent = 2);
std::string dump_json(const Json& j, int indent = 2);
Json report_header(std::string_view kind);  // {"schema": 1, "kind": kind}

struct CsvTable {
  using Cell = std::variant<std::int64_t, double, std::string>;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};
void write_csv(std::ostream& os, const CsvTable& table);
Json to_json(const CsvTable& table);  // {"columns": [...], "rows": [[...], ...]}

// Tables.
CsvTable curve_csv(const AffineCurve& curve);                       // t, x, y, rho, k
CsvTable orbit_csv(const AffineCurve& curve, const SymmetricOrbit& o);  // q, j, t, x, y, eps
CsvTable asymptotics_csv(const OrbitAsymptotics& a);
CsvTable spectrum_csv(const SpectrumTable& table);                  // q, A_q, residual
CsvTable operator_csv(const TruncatedIsospectralOperator& op);      // q, p0, p1, ...
CsvTable coefficients_csv(const EvenFourierMap& n);                 // p, c_p

// Reports.
Json domain_report(const AffineCurve& curve);
Json to_json(const SymmetricOrbit& orbit);
Json to_json(const OrbitAsymptotics& a);
Json to_json(const AsymptoticFit& fit);
Json to_json(const KernelReport& k);
Json to_json(const SplitReport& s);
Json to_json(const BoundSuiteReport& b);
Json to_json(const DeformationMap& d);
Json to_json(const ActionDerivativeCheck& c);
Json to_json(const IsospectralReport& r);
Json to_json(const RankOneReport& r);

}  // namespace sympb
