#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "weldlab/io.hpp"

using namespace weldlab;
using io::json;

namespace {
std::string tmp(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "weldlab_io_test";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}
}  // namespace

TEST_CASE("curve specs survive a JSON round trip") {
  for (const char* text : {
           R"({"kind": "circle", "params": {"center": [1, 2], "radius": 3}, "samples_n": 64})",
           R"({"kind": "ellipse", "params": {"center": [0, 0], "a": 1, "b": 0.5}, "samples_n": 128})",
           R"({"kind": "fourier_loop", "params": {"lo": -1, "coef": [[0.1, 0], [0, 0], [1, 0]]}, "samples_n": 64})",
           R"({"kind": "graph", "params": {"bumps": [{"a": 0.5, "center": 0, "sigma": 0.7}], "window": 30}, "samples_n": 65})",
           R"({"kind": "samples", "params": {"points": [[1, 0], [0, 1], [-1, 0], [0, -1]], "closed": true}, "samples_n": 32})"}) {
    auto spec = io::parse_curve_spec(json::parse(text));
    auto again = io::parse_curve_spec(io::curve_spec_json(spec));
    auto a = build_curve(spec), b = build_curve(again);
    REQUIRE(a.size() == b.size());
    for (size_t k = 0; k < a.size(); ++k) CHECK(a.points[k] == b.points[k]);
  }
  auto c = io::parse_curve_spec(json::parse(R"({"kind": "circle", "params": {"radius": 2}})"));
  CHECK(c.samples_n == 512);
}

TEST_CASE("malformed specs raise configuration errors") {
  CHECK_THROWS_AS(io::parse_curve_spec(json::parse(R"({"params": {}})")), ConfigError);
  CHECK_THROWS_AS(io::parse_curve_spec(json::parse(R"({"kind": "ellipse", "params": {"a": "wide"}})")), ConfigError);
  CHECK_THROWS_AS(io::parse_curve_spec(json::parse(R"({"kind": "circle", "params": {"center": [1]}})")), ConfigError);
  CHECK_THROWS_AS(io::parse_field(json::parse(R"({"kind": "noise"})")), ConfigError);
  CHECK_THROWS_AS(io::parse_field(json::parse(R"({"kind": "grid", "x0": 0, "y0": 0, "dx": 1, "dy": 1, "nx": 2, "ny": 2, "values": [1, 2, 3]})")),
                  ConfigError);
  io::write_text(tmp("broken.json"), "{\"kind\": ");
  CHECK_THROWS_AS(io::read_json(tmp("broken.json")), ConfigError);
  CHECK_THROWS_AS(io::read_json(tmp("missing.json")), ConfigError);
}

TEST_CASE("field specs") {
  auto f = io::parse_field(json::parse(R"({"kind": "gaussian_bumps", "bumps": [{"a": 2, "center": [1, 0], "sigma": 0.5}], "c_inf": 0})"));
  CHECK(f.value(cd(1, 0)) == doctest::Approx(2));
  CHECK(f.value(cd(1.5, 0)) == doctest::Approx(2 * std::exp(-0.5)));
  auto c = io::parse_field(json::parse(R"({"kind": "constant", "value": -0.25})"));
  CHECK(c.value(cd(7, 7)) == -0.25);
  auto g = io::parse_field(json::parse(R"({"kind": "grid", "x0": 0, "y0": 0, "dx": 1, "dy": 1, "nx": 2, "ny": 2, "values": [0, 1, 2, 3], "c_inf": 5})"));
  CHECK(g.value(cd(0.5, 0.5)) == doctest::Approx(1.5));
  CHECK(g.value(cd(10, 10)) == doctest::Approx(5));
}

TEST_CASE("CSV driving functions and homeomorphisms") {
  DrivingFunction d{{0, 0.25, 1}, {0, 0.1, -0.3}};
  io::write_text(tmp("drive.csv"), io::driving_csv(d));
  auto back = io::read_driving(tmp("drive.csv"));
  CHECK(back.t == d.t);
  CHECK(back.lambda == d.lambda);

  std::string h = "x,h\n";
  for (int k = -20; k <= 20; ++k) h += std::to_string(0.25 * k) + "," + std::to_string(0.5 * k) + "\n";
  io::write_text(tmp("homeo.csv"), h);
  auto hm = io::read_homeo(tmp("homeo.csv"), Carrier::Line);
  for (double l : hm.logd) CHECK(l == doctest::Approx(std::log(2.0)).epsilon(1e-9));

  io::write_text(tmp("nocol.csv"), "t,mu\n0,0\n1,1\n");
  CHECK_THROWS_AS(io::read_driving(tmp("nocol.csv")), ConfigError);
  io::write_text(tmp("nan.csv"), "t,lambda\n0,0\n1,abc\n");
  CHECK_THROWS_AS(io::read_driving(tmp("nan.csv")), ConfigError);
  io::write_text(tmp("back.csv"), "t,lambda\n0,0\n1,1\n0.5,2\n");
  CHECK_THROWS_AS(io::read_driving(tmp("back.csv")), ConfigError);
}

TEST_CASE("NDJSON polylines and grid CSV") {
  CurveSpec s;
  s.kind = "ellipse";
  s.samples_n = 40;
  auto c = build_curve(s);
  std::istringstream in(io::polyline_ndjson(c));
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    auto j = json::parse(line);
    CHECK(j.at("x").get<double>() == c.points[n].real());
    CHECK(j.at("y").get<double>() == c.points[n].imag());
    CHECK(j.at("t").get<double>() == c.params[n]);
    ++n;
  }
  CHECK(n == 40);
  auto grid = io::field_grid_csv(constant_field(1.0), cd(-1, -1), cd(1, 1), 3, 4);
  CHECK(std::count(grid.begin(), grid.end(), '\n') == 13);
  CHECK(grid.rfind("x,y,value\n", 0) == 0);
}

TEST_CASE("number formatting round trips and reports serialize NaN as null") {
  for (double v : {0.1, 1.0 / 3, -2.5e-17, 12345.678}) CHECK(std::stod(io::format_number(v)) == v);
  IdentityReport r;
  r.label = "x";
  r.lhs = std::nan("");
  r.rhs = {{"a", 1.0}};
  r.finalize();
  auto j = io::to_json(r);
  CHECK(j["lhs"].is_null());
  CHECK(j["rhs"]["a"] == 1.0);
  CHECK(json::parse(j.dump())["lhs"].is_null());
}
