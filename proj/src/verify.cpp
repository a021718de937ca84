#include "weldlab/verify.hpp"

#include <boost/math/special_functions/ellint_2.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "weldlab/flowline.hpp"
#include "weldlab/loewner.hpp"
#include "weldlab/welding.hpp"

namespace weldlab {

namespace {

using Clock = std::chrono::steady_clock;

// Collects cases; a group that throws is recorded as a single failed case.
struct Recorder {
  SuiteReport& out;
  Clock::time_point start;

  void add(std::string name, int criterion, double value, double tol, std::string detail = {}) {
    CaseResult c;
    c.name = std::move(name);
    c.criterion = criterion;
    c.value = value;
    c.tolerance = tol;
    c.pass = std::isfinite(value) && value <= tol;
    c.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    c.detail = std::move(detail);
    out.cases.push_back(std::move(c));
    start = Clock::now();
  }

  void group(const std::string& name, int criterion, const std::function<void()>& fn) {
    start = Clock::now();
    try {
      fn();
    } catch (const std::exception& e) {
      add(name, criterion, std::nan(""), 0, std::string("error: ") + e.what());
    }
  }
};

std::string fmt(const char* f, double a, double b = 0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

JordanCurve ellipse(double a, double b) {
  CurveSpec s;
  s.kind = "ellipse";
  s.a = a;
  s.b = b;
  return build_curve(s);
}

JordanCurve graph(std::vector<BumpSpec> bumps) {
  CurveSpec s;
  s.kind = "graph";
  s.bumps = std::move(bumps);
  return build_curve(s);
}

JordanCurve unit_circle() {
  CurveSpec s;
  s.kind = "circle";
  return build_curve(s);
}

double ellipse_perimeter(double a, double b) {
  double m = std::max(a, b), n = std::min(a, b);
  return 4 * m * boost::math::ellint_2(std::sqrt(1 - n * n / (m * m)));
}

const std::vector<double> kRadii{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.75, 0.8, 0.85, 0.9, 0.93, 0.95, 0.97, 0.98, 0.985, 0.99};
const std::vector<double> kHeights{0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 1, 1.5, 2, 3, 4, 6, 8, 10};

void baselines(Recorder& r) {
  r.group("unit circle", 1, [&] {
    auto P = map_curve(unit_circle(), Geometry::Disk);
    r.add("loop energy of the unit circle", 1, std::abs(loop_energy(P).value), 1e-6);
    double worst = 0;
    for (const auto& e : equipotentials(P, kRadii)) worst = std::max(worst, std::abs(e.energy.value));
    r.add("circle equipotentials (16 radii)", 1, worst, 1e-6);
  });
  r.group("real line", 1, [&] {
    auto P = map_curve(graph({}), Geometry::HalfPlane);
    r.add("line energy of R", 1, std::abs(line_energy(P).value), 1e-6);
    double worst = 0;
    for (const auto& e : equipotentials(P, kHeights)) worst = std::max(worst, std::abs(e.energy.value));
    r.add("line equipotentials (16 heights)", 1, worst, 1e-6);
  });
}

void loewner(Recorder& r) {
  r.group("mobius invariance", 2, [&] {
    auto e = ellipse(1, 0.8);
    double loop = loop_energy(e).value;
    double line = line_energy(apply_mobius(e, Mobius{0, 1, 1, -e.eval(0.3)})).value;
    r.add("ellipse loop vs mobius line", 2, std::abs(loop - line) / std::max(1.0, loop), 1e-2,
          fmt("loop %.10g line %.10g", loop, line));
  });
  struct Drive {
    const char* name;
    std::function<double(double)> f;
  };
  for (const auto& d : {Drive{"lambda = 0", [](double) { return 0.0; }}, Drive{"lambda = t", [](double t) { return t; }},
                        Drive{"lambda = sin t", [](double t) { return std::sin(t); }}}) {
    r.group(std::string("driving round trip ") + d.name, 6, [&] {
      DrivingFunction lam;
      for (int k = 0; k <= 200; ++k) {
        lam.t.push_back(k / 200.0);
        lam.lambda.push_back(d.f(k / 200.0));
      }
      auto back = trace_to_drive(drive_to_trace(lam).points);
      double err = 0;
      for (size_t k = 0; k < back.t.size(); ++k) err = std::max(err, std::abs(back.lambda[k] - lam(back.t[k])));
      r.add(std::string("driving round trip ") + d.name, 6, err, 5e-2, fmt("horizon %.6g", back.horizon()));
    });
  }
  r.group("driving energy closed form", 6, [&] {
    const double c = 1.5, T = 2;
    DrivingFunction lin{{0, 0.5, 1.25, T}, {0, c * 0.5, c * 1.25, c * T}};
    double e = driving_energy(lin);
    r.add("energy of lambda = c t", 6, std::abs(e - c * c * T / 2), 1e-12, fmt("energy %.17g", e));
    DrivingFunction rough;
    for (int k = 0; k <= 100; ++k) {
      rough.t.push_back(k / 100.0);
      rough.lambda.push_back(std::sin(37.0 * k) * 0.3);
    }
    r.add("driving energy is nonnegative", 6, std::max(0.0, -driving_energy(rough)), 0);
  });
}

void douglas(Recorder& r) {
  for (int k = 1; k <= 8; ++k) {
    r.group("cos " + std::to_string(k) + " theta", 3, [&] {
      SideField s;
      ScalarField f;
      f.value = [k](cd z) { return std::real(std::pow(z, k)); };
      f.grad = [k](cd z) { return std::conj(double(k) * std::pow(z, k - 1)); };
      s.phi = f;
      std::string tag = "k = " + std::to_string(k);
      r.add("quadrature " + tag, 3, std::abs(dirichlet_energy(s).value - k), 1e-3);
      std::vector<cd> pts;
      std::vector<double> vals;
      for (int i = 0; i < 512; ++i) {
        double t = 2 * kPi * i / 512;
        pts.push_back(std::polar(1.0, t));
        vals.push_back(std::cos(k * t));
      }
      r.add("spectral " + tag, 3, std::abs(h12_seminorm_spectral(vals) - k), 1e-6);
      r.add("double integral " + tag, 3, std::abs(h12_seminorm(pts, vals, true) - k), 1e-3 * k);
    });
  }
}

std::vector<std::pair<std::string, ScalarField>> test_fields() {
  return {{"zero", constant_field(0.0)},
          {"one bump", gaussian_bumps({{0.7, cd(0.5, 0.3), 0.4}})},
          {"two bumps", gaussian_bumps({{0.7, cd(0.5, 0.3), 0.6}, {-0.4, cd(-1, -0.5), 0.8}})}};
}

void cutting(Recorder& r) {
  std::vector<std::tuple<std::string, JordanCurve, Geometry>> curves{
      {"line", graph({}), Geometry::HalfPlane},
      {"graph bump", graph({{0.5, 0, 0.7}}), Geometry::HalfPlane},
      {"ellipse", ellipse(1, 0.8), Geometry::Disk}};
  for (const auto& [cname, curve, geom] : curves) {
    r.group("cutting " + cname, 4, [&] {
      auto P = map_curve(curve, geom);
      for (const auto& [fname, phi] : test_fields()) {
        auto c = cut(phi, P);
        r.add("cutting " + cname + " / " + fname, 4, std::abs(c.report.relative), 1e-2,
              fmt("lhs %.10g rhs %.10g", c.report.lhs, c.report.rhs_sum()));
      }
    });
  }
}

void welding_round_trip(Recorder& r, const std::string& name, const JordanCurve& curve, Geometry geom) {
  r.group("round trip " + name, 5, [&] {
    auto P = map_curve(curve, geom);
    bool disk = geom == Geometry::Disk;
    Carrier carrier = disk ? Carrier::Circle : Carrier::Line;
    auto nodes = disk ? loop_nodes(512) : line_nodes(1025, 40);
    auto c = cut(constant_field(0.0), P);
    auto h = isometric_homeo(boundary_values(c.u, nodes), boundary_values(c.v, nodes), carrier);
    auto truth = welding_homeo(P, (int)nodes.size(), 40);
    double herr = 0;
    for (size_t k = 0; k < h.x.size(); ++k) herr = std::max(herr, std::abs(h.h[k] - truth.h[k]));
    r.add("isometric homeomorphism " + name, 5, herr, 1e-3);
    auto W = weld_solve(h);
    r.add("welded curve " + name, 5, normalized_distance(P, W.pair), 1e-2, fmt("collocation residual %.3g", W.residual));
    auto back = welding_homeo(W.pair, (int)nodes.size(), 40);
    double berr = 0;
    for (size_t k = 0; k < h.x.size(); ++k)
      if (disk || std::abs(h.x[k]) <= 20) berr = std::max(berr, std::abs(h.h[k] - back.h[k]));
    r.add("welded homeomorphism " + name, 5, berr, 1e-3);

    auto cc = cut(constant_field(0.7), P);
    auto res = curvature_residual(cc.u, cc.v, h);
    double worst = 0;
    for (size_t k = 0; k < res.values.size(); ++k)
      if (disk || std::abs(res.nodes[k]) <= 20) worst = std::max(worst, std::abs(res.values[k]));
    r.add("curvature matching " + name, 12, worst, 1e-2);
    auto A = ambient_field(cc.u, cc.v, W.pair);
    r.add("ambient energy " + name, 12, A.glued ? A.energy : std::nan(""), 1e-3,
          fmt("trace mismatch %.3g", A.max_mismatch));
  });
}

void welding(Recorder& r) {
  welding_round_trip(r, "ellipse", ellipse(1, 0.8), Geometry::Disk);
  welding_round_trip(r, "graph bump", graph({{0.5, 0, 0.7}}), Geometry::HalfPlane);

  r.group("arclength line/line", 9, [&] {
    auto line = graph({});
    auto w = arclength_weld(line, line);
    r.add("arclength line/line equality", 9, std::abs(w.report.lhs - w.report.rhs_sum()), 1e-6);
  });
  auto sub = [&](const std::string& name, const JordanCurve& a, const JordanCurve& b, const ArclengthMarks& m) {
    r.group("arclength " + name, 9, [&] {
      auto w = arclength_weld(a, b, m);
      r.add("subadditivity " + name, 9, w.report.rhs_sum() - w.report.lhs, 1e-3,
            fmt("sum of parts %.8g welded %.8g", w.report.lhs, w.report.rhs_sum()));
    });
  };
  auto e = ellipse(1, 0.8);
  sub("ellipse/ellipse", e, e, {e.eval(0.0), e.eval(kPi / 2)});
  double k = ellipse_perimeter(1, 0.8) / ellipse_perimeter(1, 0.6);
  sub("ellipse/thin ellipse", e, ellipse(k, 0.6 * k), {});
  sub("graph/line", graph({{0.5, 0, 0.7}}), graph({}), {});

  r.group("trace machinery", 13, [&] {
    auto curve = ellipse(1, 0.8);
    auto P = map_curve(curve, Geometry::Disk);
    auto phi = gaussian_bumps({{0.7, cd(0.5, 0.3), 0.4}});
    auto on_curve = trace(phi, curve, TraceSide::Interior);
    SideField u = SideField::on(P, Side::Interior);
    u.phi = phi;
    std::vector<cd> pts, tan;
    std::vector<size_t> idx;
    for (size_t j = 0; j < curve.size(); j += 4) {
      double th = P.boundary_preimage(Side::Interior, curve.points[j]);
      pts.push_back(std::polar(1.0, th));
      tan.push_back(std::polar(1.0, th) * cd(0, 1));
      idx.push_back(j);
    }
    auto on_disk = trace([&](cd w) { return u.value(w); }, pts, tan, TraceSide::Interior, 0.25);
    double err = 0;
    for (size_t j = 0; j < idx.size(); ++j) err = std::max(err, std::abs(on_disk.values[j] - on_curve.values[idx[j]]));
    r.add("trace commutes with the Riemann map", 13, err, 1e-3);
    auto c = cut(phi, P);
    auto A = ambient_field(c.u, c.v, P);
    double parts = A.energy_inside + A.energy_outside;
    r.add("gluing matched traces", 13, A.glued ? std::abs(A.energy - parts) / std::max(1e-12, parts) : std::nan(""), 1e-2,
          fmt("glued %.10g parts %.10g", A.energy, parts));
  });
}

void flowline(Recorder& r) {
  std::vector<std::vector<Bump2D>> fields{
      {{0.6, {0, 0}, 1.0}}, {{0.8, {0.5, -0.3}, 0.7}, {-0.5, {-1, 0.4}, 0.8}}, {{1.0, {0, 0.5}, 1.2}}};
  for (size_t i = 0; i < fields.size(); ++i) {
    std::string name = "bump field " + std::to_string(i + 1);
    r.group("flowline " + name, 7, [&] {
      auto phi = gaussian_bumps(fields[i]);
      auto eta = integrate_flowline(phi, cd(0, 0));
      r.add("tangent consistency " + name, 7, tangent_consistency(phi, eta), 1e-4);
      auto rep = flowline_identity(phi, eta);
      r.add("flowline identity " + name, 7, std::abs(rep.relative), 2e-2, fmt("lhs %.10g rhs %.10g", rep.lhs, rep.rhs_sum()));
    });
  }
  std::vector<std::vector<BumpSpec>> graphs{{{0.5, 0, 0.7}}, {{0.3, 0.5, 1.0}, {-0.2, -1, 0.5}}};
  for (size_t i = 0; i < graphs.size(); ++i) {
    std::string name = "graph " + std::to_string(i + 1);
    r.group("winding " + name, 8, [&] {
      auto P = map_curve(graph(graphs[i]), Geometry::HalfPlane);
      auto rep = winding_identity(P);
      r.add("winding identity " + name, 8, std::abs(rep.residual) / std::max(1.0, rep.lhs), 2e-2,
            fmt("lhs %.10g rhs %.10g", rep.lhs, rep.rhs_sum()));
      r.add("boundary argument probe " + name, 8, rep.metadata.at("probe_max"), 1e-3);
      auto cx = complex_identity(gaussian_bumps({{0.7, {0.2, 0.1}, 0.8}}), ImaginaryPart{}, P);
      r.add("complex identity " + name, 11, std::abs(cx.relative), 2e-2, fmt("lhs %.10g rhs %.10g", cx.lhs, cx.rhs_sum()));
    });
  }
  r.group("complex identity on a flow-line", 11, [&] {
    auto phi = gaussian_bumps(fields[0]);
    auto P = map_curve(integrate_flowline(phi, cd(0, 0)), Geometry::HalfPlane);
    auto cx = complex_identity(gaussian_bumps({{0.7, {0.2, 0.1}, 0.8}}), ImaginaryPart{phi}, P);
    r.add("complex identity on a flow-line", 11, std::abs(cx.relative), 2e-2, fmt("lhs %.10g rhs %.10g", cx.lhs, cx.rhs_sum()));
  });
}

void monotonicity(Recorder& r) {
  auto sweep = [&](const std::string& name, const JordanCurve& c, Geometry g, const std::vector<double>& params) {
    r.group("sweep " + name, 10, [&] {
      auto s = monotonicity_sweep(map_curve(c, g), params);
      r.add("equipotential monotonicity " + name, 10, s.worst_violation, 1e-6);
      r.add("endpoint convergence " + name, 10, s.endpoint.metadata.at("relative_gap"), 0.1,
            fmt("curve %.8g level %.8g", s.endpoint.lhs, s.endpoint.rhs_sum()));
    });
  };
  sweep("ellipse (radii)", ellipse(1, 0.8), Geometry::Disk, kRadii);
  sweep("graph bump (heights)", graph({{0.5, 0, 0.7}}), Geometry::HalfPlane, kHeights);
}

using SuiteFn = void (*)(Recorder&);
const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> s{
      {"baselines", baselines}, {"douglas", douglas},   {"cutting", cutting},           {"welding", welding},
      {"flowline", flowline},   {"loewner", loewner},   {"monotonicity", monotonicity}};
  return s;
}

}  // namespace

bool SuiteReport::pass() const {
  for (const auto& c : cases)
    if (!c.pass) return false;
  return !cases.empty();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& s : suites()) n.push_back(s.first);
    return n;
  }();
  return names;
}

SuiteReport verify_suite(const std::string& name) {
  SuiteReport rep;
  rep.suite = name;
  Recorder rec{rep, Clock::now()};
  bool found = false;
  for (const auto& [n, fn] : suites())
    if (name == "all" || name == n) {
      fn(rec);
      found = true;
    }
  if (!found) throw ConfigError("unknown suite '" + name + "'");
  return rep;
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json j;
  j["suite"] = r.suite;
  j["pass"] = r.pass();
  j["cases"] = nlohmann::json::array();
  for (const auto& c : r.cases) {
    nlohmann::json cj{{"name", c.name}, {"criterion", c.criterion}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    cj["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
    if (!c.detail.empty()) cj["detail"] = c.detail;
    j["cases"].push_back(cj);
  }
  return j;
}

std::string console_table(const SuiteReport& r) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-4s  %-46s %12s %10s %8s  %s\n", "crit", "case", "value", "tolerance", "time", "result");
  out += buf;
  int passed = 0;
  for (const auto& c : r.cases) {
    std::snprintf(buf, sizeof buf, "%-4d  %-46s %12.3e %10.1e %7.1fs  %s\n", c.criterion, c.name.c_str(), c.value, c.tolerance,
                  c.seconds, c.pass ? "PASS" : "FAIL");
    out += buf;
    if (!c.detail.empty() && !c.pass) out += "      " + c.detail + "\n";
    passed += c.pass;
  }
  std::snprintf(buf, sizeof buf, "%s: %d/%zu passed\n", r.suite.c_str(), passed, r.cases.size());
  out += buf;
  return out;
}

}  // namespace weldlab
