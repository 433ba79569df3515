#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "sympb/errors.hpp"
#include "sympb/io.hpp"

using namespace sympb;

TEST_CASE("domain spec parsing") {
  const auto s = parse_domain_spec(Json::parse(R"({"a": 2, "b": 0.5, "perturbation": [{"j": 4, "delta": 0.01}]})"));
  CHECK(s.a == 2.0);
  CHECK(s.b == 0.5);
  REQUIRE(s.perturbation.size() == 1);
  CHECK(s.perturbation[0].j == 4);
  CHECK(s.grid_size == kDefaultGridSize);

  const auto back = parse_domain_spec(to_json(s));
  CHECK(back.a == s.a);
  CHECK(back.perturbation[0].delta == s.perturbation[0].delta);
  CHECK(back.grid_size == s.grid_size);

  for (const char* bad : {R"([1, 2])", R"({"a": 1})", R"({"a": 1, "b": 1, "c": 0})", R"({"a": "1", "b": 1})",
                          R"({"a": 1, "b": 1, "grid_size": 100.5})", R"({"a": 1, "b": 1, "perturbation": {}})",
                          R"({"a": 1, "b": 1, "perturbation": [{"j": 3}]})", R"({"a": -1, "b": 1})",
                          R"({"a": 1, "b": 1, "perturbation": [{"j": 3, "delta": 0.1}, {"j": 3, "delta": 0.2}]})",
                          R"({"a": 1, "b": 1, "grid_size": 101})", R"({"a": 1, "b": 1, "perturbation": [{"j": 1, "delta": 0.1}]})"})
    CHECK_THROWS_AS(parse_domain_spec(Json::parse(bad)), InvalidInput);
  CHECK_THROWS_AS(load_domain_spec("/nonexistent/spec.json"), InvalidInput);
  // parses, but the radius of curvature changes sign
  const auto nonconvex = parse_domain_spec(Json::parse(R"({"a": 1, "b": 1, "perturbation": [{"j": 3, "delta": 1.5}]})"));
  CHECK_THROWS_AS(build_domain(nonconvex), InvalidInput);
}

TEST_CASE("family parsing") {
  auto f = parse_family(Json::parse(R"({"base": {"a": 1, "b": 1}, "path": [{"j": 4, "delta_dot": 1}]})"));
  CHECK(f.normalization == Normalization::FixedPoints);
  CHECK_FALSE(f.affine.has_value());
  CHECK(f.tau_min == doctest::Approx(-0.1));

  f = parse_family(Json::parse(R"({"base": {"a": 1, "b": 1}, "affine": [[1, 0], [0, -1]], "interval": [-0.2, 0.3]})"));
  CHECK(f.normalization == Normalization::Raw);
  REQUIRE(f.affine.has_value());
  CHECK((*f.affine)(1, 1) == -1.0);
  CHECK(f.tau_max == 0.3);

  const auto back = parse_family(to_json(f));
  CHECK(back.normalization == f.normalization);
  CHECK(*back.affine == *f.affine);
  CHECK(back.tau_min == f.tau_min);

  for (const char* bad : {R"({"path": []})", R"({"base": {"a": 1, "b": 1}, "affine": [[1, 0], [0, 2]]})",
                          R"({"base": {"a": 1, "b": 1}, "affine": [[1, 0]]})",
                          R"({"base": {"a": 1, "b": 1}, "normalization": "none"})",
                          R"({"base": {"a": 1, "b": 1}, "interval": [0.1, 0.2]})",
                          R"({"base": {"a": 1, "b": 1}, "path": [{"j": 1, "delta_dot": 1}]})",
                          R"({"base": {"a": 1, "b": 1}, "extra": true})"})
    CHECK_THROWS_AS(parse_family(Json::parse(bad)), InvalidInput);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(std::stod(format_double(std::acos(-1.0))) == std::acos(-1.0));
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");

  Json j = report_header("test");
  j["x"] = 0.1;
  j["bad"] = std::numeric_limits<double>::infinity();
  j["v"] = {1.0, 2.5};
  const auto s = dump_json(j);
  CHECK(s.find("\"schema\": 1") != std::string::npos);
  CHECK(s.find("\"kind\": \"test\"") != std::string::npos);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("\"bad\": null") != std::string::npos);
  CHECK(s.find("[1, 2.5]") != std::string::npos);
  const auto parsed = Json::parse(s);
  CHECK(parsed["x"].get<double>() == 0.1);
  CHECK(parsed["schema"] == kSchemaVersion);
}

TEST_CASE("csv tables") {
  CsvTable t{{"q", "value", "tag"}, {{std::int64_t{3}, 0.5, std::string("a")}, {std::int64_t{4}, -1.0 / 3.0, std::string("b")}}};
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() == "q,value,tag\n3,0.5,a\n4,-0.33333333333333331,b\n");
  const auto j = to_json(t);
  CHECK(j["columns"].size() == 3);
  CHECK(j["rows"][1][0] == 4);

  ConvexDomainSpec s;
  const auto c = build_domain(s);
  const auto tab = curve_csv(c);
  CHECK(tab.header.front() == "t");
  CHECK(tab.rows.size() == static_cast<std::size_t>(c.grid_size()));
  const auto rep = domain_report(c);
  CHECK(rep["kind"] == "domain");
  CHECK(rep["is_ellipse"] == true);
  CHECK(rep["perimeter"].get<double>() == doctest::Approx(2 * std::acos(-1.0)));
}
