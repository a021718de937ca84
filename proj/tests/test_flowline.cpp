#include "doctest.h"
#include "weldlab/flowline.hpp"

using namespace weldlab;

namespace {
JordanCurve graph(std::vector<BumpSpec> bumps) {
  CurveSpec s;
  s.kind = "graph";
  s.bumps = std::move(bumps);
  return build_curve(s);
}
}  // namespace

TEST_CASE("flow-lines of a constant angle are straight lines") {
  auto eta = integrate_flowline(constant_field(0.4), cd(1, -2));
  cd dir = std::polar(1.0, 0.4);
  for (double s : {-20.0, -1.0, 0.0, 3.0, 40.0}) CHECK(std::abs(eta.eval(s) - (cd(1, -2) + s * dir)) < 1e-8);
  CHECK(tangent_consistency(constant_field(0.4), eta) < 1e-10);
  CHECK(std::abs(curve_energy(eta).value) < 1e-6);
}

TEST_CASE("flow-lines are arclength parametrized and follow the field") {
  auto phi = gaussian_bumps({{0.8, {0.5, -0.3}, 0.7}, {-0.5, {-1, 0.4}, 0.8}});
  auto eta = integrate_flowline(phi, cd(0, 0));
  CHECK(tangent_consistency(phi, eta) < 1e-4);
  for (double s : {-3.0, -0.2, 0.0, 1.1, 5.0}) {
    double h = 1e-3;
    CHECK(std::abs(eta.eval(s + h) - eta.eval(s - h)) / (2 * h) == doctest::Approx(1).epsilon(1e-4));
  }
  CHECK(std::abs(eta.eval(0.0)) < 1e-12);
  FlowOptions tight;
  tight.abs_tol = 1e-10;
  auto eta2 = integrate_flowline(phi, cd(0, 0), tight);
  for (double s = -10; s <= 10; s += 0.5) CHECK(std::abs(eta.eval(s) - eta2.eval(s)) < 1e-5);
}

TEST_CASE("flow-line identity for a bump field") {
  std::vector<Bump2D> b{{0.6, {0, 0}, 1.0}};
  auto phi = gaussian_bumps(b);
  auto r = flowline_identity(phi, integrate_flowline(phi, cd(0, 0)));
  CHECK(std::abs(r.relative) < 2e-2);
  CHECK(r.lhs == doctest::Approx(gaussian_bumps_energy(b)).epsilon(1e-5));
}

TEST_CASE("winding identity and its probe") {
  auto line = winding_identity(graph({}));
  CHECK(std::abs(line.lhs) < 1e-6);
  CHECK(std::abs(line.rhs_sum()) < 1e-6);
  auto r = winding_identity(graph({{0.5, 0, 0.7}}));
  CHECK(std::abs(r.residual) < 2e-2 * std::max(1.0, r.lhs));
  CHECK(r.metadata.at("probe_max") < 1e-3);
}

TEST_CASE("complex identity with the winding extension") {
  auto P = map_curve(graph({{0.5, 0, 0.7}}), Geometry::HalfPlane);
  auto r = complex_identity(gaussian_bumps({{0.7, {0.2, 0.1}, 0.8}}), ImaginaryPart{}, P);
  CHECK(std::abs(r.relative) < 2e-2);
}

TEST_CASE("equipotential energies are monotone") {
  CurveSpec s;
  s.kind = "ellipse";
  s.a = 1;
  s.b = 0.7;
  auto disk = monotonicity_sweep(map_curve(build_curve(s), Geometry::Disk), {0.3, 0.6, 0.9, 0.99});
  CHECK(disk.worst_violation <= 1e-6);
  for (size_t k = 1; k < disk.levels.size(); ++k) CHECK(disk.levels[k].energy.value >= disk.levels[k - 1].energy.value - 1e-6);
  auto hp = monotonicity_sweep(map_curve(graph({{0.5, 0, 0.7}}), Geometry::HalfPlane), {0.01, 0.1, 1, 5});
  CHECK(hp.worst_violation <= 1e-6);
  for (size_t k = 1; k < hp.levels.size(); ++k) CHECK(hp.levels[k].energy.value <= hp.levels[k - 1].energy.value + 1e-6);
  CHECK(hp.endpoint.metadata.at("relative_gap") < 0.1);
}
