#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "weldlab/flowline.hpp"
#include "weldlab/io.hpp"
#include "weldlab/loewner.hpp"
#include "weldlab/parallel.hpp"
#include "weldlab/verify.hpp"
#include "weldlab/welding.hpp"

using namespace weldlab;
using io::json;

namespace {

struct Settings {
  std::string out = ".";
  int threads = 0;
  int samples_n = 0;
  int boundary_n = 0;
  int quad_levels = 0;
  double flow_tol = 0;
  std::string geometry;  // disk | halfplane, empty picks by curve kind

  MapOptions map() const {
    MapOptions m;
    m.boundary_n = boundary_n;
    return m;
  }
  QuadOptions quad() const {
    QuadOptions q;
    if (quad_levels > 0) {
      q.deltas.clear();
      for (int k = 0; k < quad_levels; ++k) q.deltas.push_back(std::ldexp(1.0, -6 - k));
    }
    return q;
  }
  FlowOptions flow() const {
    FlowOptions f;
    if (flow_tol > 0) f.abs_tol = flow_tol;
    return f;
  }
  std::string path(const std::string& name) const {
    std::filesystem::create_directories(out);
    return (std::filesystem::path(out) / name).string();
  }
  JordanCurve curve(const std::string& file) const {
    auto spec = io::parse_curve_spec(io::read_json(file));
    if (samples_n > 0) spec.samples_n = samples_n;
    return build_curve(spec);
  }
  Geometry geometry_for(const JordanCurve& c) const {
    if (geometry == "disk") return Geometry::Disk;
    if (geometry == "halfplane") return Geometry::HalfPlane;
    return c.is_loop() ? Geometry::Disk : Geometry::HalfPlane;
  }
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

Carrier carrier_of(const std::string& s) {
  if (s == "line") return Carrier::Line;
  if (s == "circle") return Carrier::Circle;
  throw ConfigError("carrier must be line or circle");
}

json energy_json(const LoewnerEnergy& e, const ConformalPair& p) {
  return {{"I_L", e.value}, {"raw", e.raw}, {"clamped", e.clamped}, {"resolution", p.boundary_n},
          {"geometry", p.geometry == Geometry::Disk ? "disk" : "halfplane"},
          {"backend", p.diagnostics.count("zipper") && p.diagnostics.at("zipper") == 1 ? "zipper" : "theodorsen"},
          {"spectral_tail", p.diagnostics.count("tail") ? p.diagnostics.at("tail") : 0.0}};
}

LoewnerEnergy energy_of(const ConformalPair& p) {
  return p.geometry == Geometry::Disk ? loop_energy(p) : line_energy(p);
}

std::string boundary_csv(const BoundaryFunction& u, const BoundaryFunction& v) {
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < u.nodes.size(); ++k) rows.push_back({u.nodes[k], u.values[k], v.values[k]});
  return io::csv({"x", "u", "v"}, rows);
}

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  CLI::App app{"weldlab: Loewner energy, conformal welding and flow-line computations"};
  app.require_subcommand(1);
  app.add_option("--out", s.out, "Output directory")->capture_default_str();
  app.add_option("--threads", s.threads, "Worker threads (default: WELDLAB_THREADS or all cores)")->check(CLI::PositiveNumber);
  app.add_option("--samples-n", s.samples_n, "Override samples_n of curve specs")->check(CLI::Range(8, 1 << 20));
  app.add_option("--boundary-n", s.boundary_n, "Boundary nodes of the conformal maps (0 = automatic)")->check(CLI::NonNegativeNumber);
  app.add_option("--quad-levels", s.quad_levels, "Number of cut-off levels in the disk quadrature")->check(CLI::Range(2, 8));
  app.add_option("--flow-tol", s.flow_tol, "Flow-line integrator absolute tolerance")->check(CLI::PositiveNumber);
  app.add_option("--geometry", s.geometry, "disk or halfplane")->check(CLI::IsMember({"disk", "halfplane"}));

  std::string curve_file, field_file, driving_file, homeo_file, u_file, v_file, carrier = "line", suite;
  std::string curve2_file;
  int steps = 2000, grid = 0;
  std::vector<double> params, z0{0, 0};

  auto* c_curve = app.add_subcommand("curve", "Sample a curve spec to an NDJSON polyline");
  c_curve->add_option("--curve", curve_file, "Curve spec JSON")->required()->check(CLI::ExistingFile);

  auto* c_energy = app.add_subcommand("energy", "Loewner energy of a curve");
  c_energy->add_option("--curve", curve_file, "Curve spec JSON")->required()->check(CLI::ExistingFile);

  auto* c_drive = app.add_subcommand("drive", "Driving function to trace, or chord samples to driving function");
  auto* drive_in = c_drive->add_option("--driving", driving_file, "CSV with columns t, lambda")->check(CLI::ExistingFile);
  auto* chord_in = c_drive->add_option("--chord", curve_file, "Curve spec of kind samples, starting on R")->check(CLI::ExistingFile);
  c_drive->add_option("--steps", steps, "Slit maps per unit capacity")->check(CLI::PositiveNumber);
  drive_in->excludes(chord_in);
  c_drive->require_option(1);

  auto* c_cut = app.add_subcommand("cut", "Cut a field along a curve");
  c_cut->add_option("--curve", curve_file, "Curve spec JSON")->required()->check(CLI::ExistingFile);
  c_cut->add_option("--field", field_file, "Field spec JSON")->required()->check(CLI::ExistingFile);

  auto* c_weld = app.add_subcommand("weld", "Solve a conformal welding problem");
  auto* w_homeo = c_weld->add_option("--homeo", homeo_file, "CSV with columns x, h")->check(CLI::ExistingFile);
  auto* w_u = c_weld->add_option("--density-u", u_file, "CSV with columns x, log_density")->check(CLI::ExistingFile);
  auto* w_v = c_weld->add_option("--density-v", v_file, "CSV with columns x, log_density")->check(CLI::ExistingFile);
  auto* w_c1 = c_weld->add_option("--arclength", curve_file, "First curve for arclength welding")->check(CLI::ExistingFile);
  auto* w_c2 = c_weld->add_option("--with", curve2_file, "Second curve for arclength welding")->check(CLI::ExistingFile);
  c_weld->add_option("--carrier", carrier, "line or circle")->check(CLI::IsMember({"line", "circle"}));
  w_u->needs(w_v);
  w_v->needs(w_u);
  w_c1->needs(w_c2);
  w_homeo->excludes(w_u)->excludes(w_c1);
  w_u->excludes(w_c1);

  auto* c_flow = app.add_subcommand("flow", "Integrate a flow-line and check its energy identity");
  c_flow->add_option("--field", field_file, "Field spec JSON")->required()->check(CLI::ExistingFile);
  c_flow->add_option("--z0", z0, "Start point x y")->expected(2);
  c_flow->add_option("--grid", grid, "Also write the field on an n-by-n grid over [-4, 4]^2")->check(CLI::NonNegativeNumber);

  auto* c_sweep = app.add_subcommand("sweep", "Equipotential energy profile");
  c_sweep->add_option("--curve", curve_file, "Curve spec JSON")->required()->check(CLI::ExistingFile);
  c_sweep->add_option("--params", params, "Radii (disk) or heights (half-plane)");

  auto* c_verify = app.add_subcommand("verify", "Run a verification suite");
  std::string suites = "all";
  for (const auto& n : suite_names()) suites += "|" + n;
  c_verify->add_option("--suite", suite, suites)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (s.threads > 0) set_thread_override(s.threads);

    if (app.got_subcommand(c_curve)) {
      auto c = s.curve(curve_file);
      auto file = s.path("curve.ndjson");
      io::write_text(file, io::polyline_ndjson(c));
      emit({{"kind", c.tag}, {"closed", c.is_loop()}, {"samples", c.size()}, {"diameter", c.diameter()}, {"polyline", file}});
    } else if (app.got_subcommand(c_energy)) {
      auto c = s.curve(curve_file);
      auto p = map_curve(c, s.geometry_for(c), s.map());
      auto j = energy_json(energy_of(p), p);
      io::write_json(s.path("energy.json"), j);
      emit(j);
    } else if (app.got_subcommand(c_drive)) {
      if (!driving_file.empty()) {
        auto d = io::read_driving(driving_file);
        auto chord = drive_to_trace(d, steps);
        auto file = s.path("trace.ndjson");
        io::write_text(file, io::polyline_ndjson(chord.times, chord.points));
        emit({{"energy", driving_energy(d)}, {"tip", {chord.tip().real(), chord.tip().imag()}}, {"trace", file}});
      } else {
        auto spec = io::parse_curve_spec(io::read_json(curve_file));
        if (spec.kind != "samples") throw ConfigError("--chord expects a curve spec of kind samples");
        auto d = trace_to_drive(spec.samples);
        auto file = s.path("driving.csv");
        io::write_text(file, io::driving_csv(d));
        emit({{"energy", driving_energy(d)}, {"horizon", d.horizon()}, {"driving", file}});
      }
    } else if (app.got_subcommand(c_cut)) {
      auto c = s.curve(curve_file);
      auto p = map_curve(c, s.geometry_for(c), s.map());
      auto r = cut(io::load_field(field_file), p, s.quad());
      bool disk = p.geometry == Geometry::Disk;
      auto nodes = disk ? loop_nodes(512) : line_nodes(1025, 40);
      io::write_text(s.path("cut_boundary.csv"), boundary_csv(boundary_values(r.u, nodes), boundary_values(r.v, nodes)));
      auto j = io::to_json(r.report);
      io::write_json(s.path("cut.json"), j);
      emit(j);
    } else if (app.got_subcommand(c_weld)) {
      if (!curve_file.empty()) {
        auto w = arclength_weld(s.curve(curve_file), s.curve(curve2_file));
        io::write_text(s.path("weld_first.ndjson"), io::polyline_ndjson(w.first.curve));
        io::write_text(s.path("weld_second.ndjson"), io::polyline_ndjson(w.second.curve));
        auto j = io::to_json(w.report);
        io::write_json(s.path("weld.json"), j);
        emit(j);
      } else {
        Homeomorphism h;
        Carrier cr = carrier_of(carrier);
        if (!homeo_file.empty()) {
          h = io::read_homeo(homeo_file, cr);
        } else if (!u_file.empty()) {
          h = isometric_homeo(io::read_density(u_file, cr), io::read_density(v_file, cr), cr);
        } else {
          throw ConfigError("weld needs --homeo, --density-u/--density-v, or --arclength/--with");
        }
        auto w = weld_solve(h);
        io::write_text(s.path("weld.ndjson"), io::polyline_ndjson(w.curve));
        io::write_text(s.path("weld_homeo.csv"), io::homeo_csv(h));
        json j{{"residual", w.residual}, {"terms", w.terms}, {"I_L", energy_of(w.pair).value}};
        io::write_json(s.path("weld.json"), j);
        emit(j);
      }
    } else if (app.got_subcommand(c_flow)) {
      auto phi = io::load_field(field_file);
      auto eta = integrate_flowline(phi, cd(z0[0], z0[1]), s.flow());
      io::write_text(s.path("flowline.ndjson"), io::polyline_ndjson(eta));
      if (grid > 1) io::write_text(s.path("field_grid.csv"), io::field_grid_csv(phi, cd(-4, -4), cd(4, 4), grid, grid));
      auto j = io::to_json(flowline_identity(phi, eta, s.quad()));
      j["tangent_consistency"] = tangent_consistency(phi, eta);
      io::write_json(s.path("flow.json"), j);
      emit(j);
    } else if (app.got_subcommand(c_sweep)) {
      auto c = s.curve(curve_file);
      auto p = map_curve(c, s.geometry_for(c), s.map());
      bool disk = p.geometry == Geometry::Disk;
      if (params.empty())
        params = disk ? std::vector<double>{0.2, 0.4, 0.6, 0.8, 0.9, 0.95, 0.99}
                      : std::vector<double>{0.01, 0.05, 0.1, 0.5, 1, 2, 5};
      auto sw = monotonicity_sweep(p, params, s.map());
      std::vector<std::vector<double>> rows;
      for (const auto& l : sw.levels) rows.push_back({l.param, l.energy.value});
      io::write_text(s.path("sweep.csv"), io::csv({disk ? "r" : "y", "energy"}, rows));
      json j{{"worst_violation", sw.worst_violation}, {"endpoint", io::to_json(sw.endpoint)}, {"verdicts", json::array()}};
      for (const auto& v : sw.verdicts) j["verdicts"].push_back(io::to_json(v));
      io::write_json(s.path("sweep.json"), j);
      emit(j);
    } else if (app.got_subcommand(c_verify)) {
      auto r = verify_suite(suite);
      io::write_json(s.path("verify_" + suite + ".json"), to_json(r));
      std::cout << console_table(r);
      return r.pass() ? 0 : 1;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json diag{{"error", "computation"}, {"message", e.what()}};
    std::cerr << diag.dump(2) << "\n";
    return 1;
  }
}
