#include "doctest.h"
#include "weldlab/conformal.hpp"

using namespace weldlab;

namespace {
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
}  // namespace

TEST_CASE("exterior map of an ellipse is the Joukowski map") {
  const double a = 1, b = 0.8;
  auto P = map_curve(ellipse(a, b), Geometry::Disk);
  CHECK(std::abs(P.g.S.coef(1) - (a + b) / 2) < 1e-9);
  CHECK(std::abs(P.g.S.coef(-1) - (a - b) / 2) < 1e-9);
  CHECK(std::abs(P.g.S.coef(0)) < 1e-9);
  CHECK(std::abs(P.g.S.coef(-3)) < 1e-9);
}

TEST_CASE("interior map of an ellipse lands on the ellipse and is normalized") {
  auto P = map_curve(ellipse(1, 0.6), Geometry::Disk);
  for (int k = 0; k < 64; ++k) {
    cd z = P.map(Side::Interior, std::polar(1.0, 2 * kPi * k / 64));
    CHECK(std::abs(z.real() * z.real() + z.imag() * z.imag() / 0.36 - 1) < 1e-8);
  }
  CHECK(std::abs(P.map(Side::Interior, 0.0)) < 1e-10);
  cd d0 = P.f.dS(0.0);
  CHECK(d0.real() > 0);
  CHECK(std::abs(d0.imag()) < 1e-12);
  CHECK(std::abs(P.map(Side::Exterior, 1.0) - P.map(Side::Interior, 1.0)) < 1e-9);
}

TEST_CASE("log derivative matches finite differences of the map") {
  auto P = map_curve(ellipse(1, 0.7), Geometry::Disk);
  for (cd w : {cd(0.3, 0.2), cd(-0.5, 0.1)}) {
    cd h = 1e-6;
    cd fd = (P.map(Side::Interior, w + h) - P.map(Side::Interior, w - h)) / (2.0 * h);
    CHECK(std::abs(P.log_deriv(Side::Interior, w).real() - std::log(std::abs(fd))) < 1e-7);
  }
  for (cd w : {cd(2, 1), cd(-1.5, -0.5)}) {
    cd h = 1e-6;
    cd fd = (P.map(Side::Exterior, w + h) - P.map(Side::Exterior, w - h)) / (2.0 * h);
    CHECK(std::abs(P.log_deriv(Side::Exterior, w).real() - std::log(std::abs(fd))) < 1e-7);
  }
}

TEST_CASE("half-plane maps of the real line are affine") {
  auto P = map_curve(graph({}), Geometry::HalfPlane);
  cd f0 = P.map(Side::Interior, 0.0), f1 = P.map(Side::Interior, 1.0);
  for (cd z : {cd(0.4, 1.0), cd(-2, 0.5), cd(3, 4)}) {
    CHECK(std::abs(P.map(Side::Interior, z) - (f0 + (f1 - f0) * z)) < 1e-8);
    CHECK(std::abs(P.log_deriv(Side::Interior, z).real() - std::log(std::abs(f1 - f0))) < 1e-8);
  }
}

TEST_CASE("half-plane map of a graph sends R onto the graph") {
  auto c = graph({{0.5, 0, 0.7}});
  auto P = map_curve(c, Geometry::HalfPlane);
  for (double x : {-5.0, -1.0, 0.0, 0.3, 2.0, 8.0}) {
    cd z = P.map(Side::Interior, x);
    double y = 0.5 * std::exp(-0.5 * z.real() * z.real() / 0.49);
    CHECK(std::abs(z.imag() - y) < 1e-7);
    CHECK(P.boundary_preimage(Side::Interior, z) == doctest::Approx(x).epsilon(1e-7));
  }
  CHECK(P.map(Side::Interior, cd(0, 1)).imag() > 0.5);
  CHECK(P.map(Side::Exterior, cd(0, -1)).imag() < 0);
}

TEST_CASE("welding homeomorphism of a circle is the identity") {
  CurveSpec s;
  s.kind = "circle";
  auto P = map_curve(build_curve(s), Geometry::Disk);
  auto h = welding_homeo(P, 128);
  for (size_t k = 0; k < h.x.size(); ++k) {
    CHECK(std::abs(h.h[k] - h.x[k]) < 1e-9);
    CHECK(std::abs(h.logd[k]) < 1e-9);
  }
  CHECK(h.h12_logd() < 1e-12);
}

TEST_CASE("welding homeomorphism is increasing with consistent derivative") {
  auto P = map_curve(ellipse(1, 0.8), Geometry::Disk);
  auto h = welding_homeo(P, 256);
  for (size_t k = 1; k < h.x.size(); ++k) CHECK(h.h[k] > h.h[k - 1]);
  for (double t : {0.3, 1.7, 4.4}) {
    double fd = (h.eval(t + 1e-5) - h.eval(t - 1e-5)) / 2e-5;
    CHECK(h.deriv(t) == doctest::Approx(fd).epsilon(1e-6));
    CHECK(h.inverse(h.eval(t)) == doctest::Approx(t).epsilon(1e-10));
  }
  CHECK(h.eval(1.0 + 2 * kPi) == doctest::Approx(h.eval(1.0) + 2 * kPi).epsilon(1e-12));
}

TEST_CASE("hermite homeomorphism reproduces a smooth map") {
  Homeomorphism h;
  h.domain = Carrier::Line;
  for (int k = 0; k <= 400; ++k) {
    double x = -10 + k * 0.05;
    h.x.push_back(x);
    h.h.push_back(x + 0.3 * std::sin(x));
    h.logd.push_back(std::log(1 + 0.3 * std::cos(x)));
  }
  for (double t : {-7.3, -0.01, 2.2, 9.9}) {
    CHECK(h.eval(t) == doctest::Approx(t + 0.3 * std::sin(t)).epsilon(1e-7));
    CHECK(h.deriv(t) == doctest::Approx(1 + 0.3 * std::cos(t)).epsilon(1e-5));
  }
  CHECK(h.max_qs_ratio() < 2);
}

TEST_CASE("disk geometry rejects curves through infinity") {
  CHECK_THROWS_AS(map_curve(graph({}), Geometry::Disk), ConfigError);
}

TEST_CASE("zipper backend reproduces the Joukowski map") {
  MapOptions opt;
  opt.zipper_only = true;
  auto P = map_curve(ellipse(1, 0.8), Geometry::Disk, opt);
  CHECK(P.diagnostics.at("zipper") == 1);
  CHECK(std::abs(P.g.S.coef(1) - 0.9) < 1e-6);
  CHECK(std::abs(P.g.S.coef(-1) - 0.1) < 1e-6);
  CHECK(std::abs(P.g.S.coef(-3)) < 1e-6);
  CHECK(std::abs(P.map(Side::Interior, 0.0)) < 1e-6);
}

TEST_CASE("loops that are not star-shaped fall back to the zipper") {
  auto inv = apply_mobius(ellipse(1, 0.4), Mobius{0, 1, 1, cd(-0.1, -0.2)});
  auto P = map_curve(inv, Geometry::Disk);
  CHECK(P.diagnostics.at("zipper") == 1);
  for (int k = 0; k < 16; ++k) {
    double t = 2 * kPi * k / 16;
    cd z = P.map(Side::Interior, std::polar(1.0, t));
    CHECK(std::abs(inv.eval(param_of_point(inv, z)) - z) < 1e-6);
  }
}
