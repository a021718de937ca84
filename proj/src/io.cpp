#include "weldlab/io.hpp"

#include <boost/math/interpolators/makima.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace weldlab::io {

namespace {

cd point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("expected a point [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class F>
auto guarded(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    size_t a = cell.find_first_not_of(" \t\r"), b = cell.find_last_not_of(" \t\r");
    out.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
  }
  return out;
}

}  // namespace

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return guarded("invalid JSON in " + path, [&] { return json::parse(in); });
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("write failed for " + path);
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

CurveSpec parse_curve_spec(const json& j) {
  return guarded("invalid curve specification", [&] {
    CurveSpec s;
    s.kind = j.at("kind").get<std::string>();
    s.samples_n = j.value("samples_n", 512);
    if (s.samples_n < 8) throw ConfigError("samples_n must be at least 8");
    json p = j.value("params", json::object());
    if (s.kind == "circle") {
      s.center = p.contains("center") ? point(p["center"]) : cd(0);
      s.radius = p.value("radius", 1.0);
    } else if (s.kind == "ellipse") {
      s.center = p.contains("center") ? point(p["center"]) : cd(0);
      s.a = p.value("a", 1.0);
      s.b = p.value("b", 1.0);
    } else if (s.kind == "fourier_loop") {
      s.coef_lo = p.value("lo", -1);
      for (const auto& c : p.at("coef")) s.coef.push_back(point(c));
    } else if (s.kind == "graph") {
      for (const auto& b : p.value("bumps", json::array()))
        s.bumps.push_back({b.at("a").get<double>(), b.value("center", 0.0), b.value("sigma", 1.0)});
      s.window = p.value("window", 0.0);
    } else if (s.kind == "samples") {
      for (const auto& c : p.at("points")) s.samples.push_back(point(c));
      s.samples_closed = p.value("closed", true);
    } else {
      throw ConfigError("unknown curve kind '" + s.kind + "'");
    }
    return s;
  });
}

json curve_spec_json(const CurveSpec& s) {
  json p = json::object();
  auto pt = [](cd z) { return json::array({z.real(), z.imag()}); };
  if (s.kind == "circle") {
    p["center"] = pt(s.center);
    p["radius"] = s.radius;
  } else if (s.kind == "ellipse") {
    p["center"] = pt(s.center);
    p["a"] = s.a;
    p["b"] = s.b;
  } else if (s.kind == "fourier_loop") {
    p["lo"] = s.coef_lo;
    p["coef"] = json::array();
    for (cd c : s.coef) p["coef"].push_back(pt(c));
  } else if (s.kind == "graph") {
    p["bumps"] = json::array();
    for (const auto& b : s.bumps) p["bumps"].push_back({{"a", b.a}, {"center", b.center}, {"sigma", b.sigma}});
    if (s.window > 0) p["window"] = s.window;
  } else if (s.kind == "samples") {
    p["points"] = json::array();
    for (cd c : s.samples) p["points"].push_back(pt(c));
    p["closed"] = s.samples_closed;
  }
  return {{"kind", s.kind}, {"params", p}, {"samples_n", s.samples_n}};
}

JordanCurve load_curve(const std::string& path) { return build_curve(parse_curve_spec(read_json(path))); }

ScalarField parse_field(const json& j) {
  return guarded("invalid field specification", [&] {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant_field(j.at("value").get<double>());
    if (kind == "gaussian_bumps") {
      std::vector<Bump2D> bumps;
      for (const auto& b : j.at("bumps")) {
        Bump2D g;
        g.a = b.at("a").get<double>();
        g.center = b.contains("center") ? point(b["center"]) : cd(0);
        g.sigma = b.value("sigma", 1.0);
        if (!(g.sigma > 0)) throw ConfigError("bump sigma must be positive");
        bumps.push_back(g);
      }
      return gaussian_bumps(bumps, j.value("c_inf", 0.0));
    }
    if (kind == "grid") {
      int nx = j.at("nx").get<int>(), ny = j.at("ny").get<int>();
      auto values = j.at("values").get<std::vector<double>>();
      if (nx < 2 || ny < 2 || (int)values.size() != nx * ny) throw ConfigError("grid needs nx*ny values with nx, ny >= 2");
      return grid_field(j.at("x0").get<double>(), j.at("y0").get<double>(), j.at("dx").get<double>(), j.at("dy").get<double>(),
                        nx, ny, values, j.value("c_inf", 0.0));
    }
    throw ConfigError("unknown field kind '" + kind + "'");
  });
}

ScalarField load_field(const std::string& path) { return parse_field(read_json(path)); }

std::vector<std::vector<double>> read_csv(const std::string& path, const std::vector<std::string>& columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
  auto header = split(line);
  std::vector<size_t> idx;
  for (const auto& c : columns) {
    auto it = std::find(header.begin(), header.end(), c);
    if (it == header.end()) throw ConfigError(path + ": missing column '" + c + "'");
    idx.push_back(it - header.begin());
  }
  std::vector<std::vector<double>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split(line);
    std::vector<double> row;
    for (size_t i : idx) {
      if (i >= cells.size()) throw ConfigError(path + ":" + std::to_string(lineno) + ": too few columns");
      try {
        size_t used = 0;
        row.push_back(std::stod(cells[i], &used));
        if (used != cells[i].size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": not a number '" + cells[i] + "'");
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : rows) {
    for (size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_number(r[i]);
    out += "\n";
  }
  return out;
}

DrivingFunction read_driving(const std::string& path) {
  DrivingFunction d;
  for (const auto& r : read_csv(path, {"t", "lambda"})) {
    d.t.push_back(r[0]);
    d.lambda.push_back(r[1]);
  }
  d.validate();
  return d;
}

std::string driving_csv(const DrivingFunction& d) {
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < d.t.size(); ++k) rows.push_back({d.t[k], d.lambda[k]});
  return csv({"t", "lambda"}, rows);
}

Homeomorphism read_homeo(const std::string& path, Carrier carrier) {
  Homeomorphism h;
  h.domain = carrier;
  for (const auto& r : read_csv(path, {"x", "h"})) {
    h.x.push_back(r[0]);
    h.h.push_back(r[1]);
  }
  if (h.x.size() < 4) throw ConfigError(path + ": homeomorphism needs at least four samples");
  for (size_t k = 1; k < h.x.size(); ++k)
    if (!(h.x[k] > h.x[k - 1]) || !(h.h[k] > h.h[k - 1])) throw ConfigError(path + ": samples must be strictly increasing");
  // derivative from a makima interpolant (for the circle, the wrap-around point closes the period)
  std::vector<double> xs = h.x, hs = h.h;
  if (carrier == Carrier::Circle) {
    xs.push_back(h.x.front() + 2 * kPi);
    hs.push_back(h.h.front() + 2 * kPi);
  }
  boost::math::interpolators::makima<std::vector<double>> p{std::move(xs), std::move(hs)};
  for (double x : h.x) {
    double d = p.prime(x);
    if (!(d > 0)) throw ConfigError(path + ": homeomorphism derivative vanishes");
    h.logd.push_back(std::log(d));
  }
  return h;
}

std::string homeo_csv(const Homeomorphism& h) {
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < h.x.size(); ++k) rows.push_back({h.x[k], h.h[k], h.logd[k]});
  return csv({"x", "h", "log_derivative"}, rows);
}

BoundaryFunction read_density(const std::string& path, Carrier carrier) {
  BoundaryFunction bf;
  bf.carrier = carrier;
  for (const auto& r : read_csv(path, {"x", "log_density"})) {
    bf.nodes.push_back(r[0]);
    bf.values.push_back(r[1]);
  }
  bf.valid.assign(bf.nodes.size(), true);
  for (size_t k = 1; k < bf.nodes.size(); ++k)
    if (!(bf.nodes[k] > bf.nodes[k - 1])) throw ConfigError(path + ": x must be strictly increasing");
  return bf;
}

std::string polyline_ndjson(const std::vector<double>& t, const std::vector<cd>& z) {
  std::string out;
  for (size_t k = 0; k < z.size(); ++k)
    out += "{\"t\":" + format_number(t[k]) + ",\"x\":" + format_number(z[k].real()) + ",\"y\":" + format_number(z[k].imag()) + "}\n";
  return out;
}

std::string polyline_ndjson(const JordanCurve& c) { return polyline_ndjson(c.params, c.points); }

std::string field_grid_csv(const ScalarField& f, cd lo, cd hi, int nx, int ny) {
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      double x = lo.real() + (hi.real() - lo.real()) * i / std::max(1, nx - 1);
      double y = lo.imag() + (hi.imag() - lo.imag()) * j / std::max(1, ny - 1);
      rows.push_back({x, y, f.value(cd(x, y))});
    }
  return csv({"x", "y", "value"}, rows);
}

json to_json(const IdentityReport& r) {
  json j;
  j["label"] = r.label;
  j["lhs"] = number(r.lhs);
  j["rhs"] = json::object();
  for (const auto& [k, v] : r.rhs) j["rhs"][k] = number(v);
  j["residual"] = number(r.residual);
  j["relative"] = number(r.relative);
  j["metadata"] = json::object();
  for (const auto& [k, v] : r.metadata) j["metadata"][k] = number(v);
  j["notes"] = json::object();
  for (const auto& [k, v] : r.notes) j["notes"][k] = v;
  return j;
}

}  // namespace weldlab::io
