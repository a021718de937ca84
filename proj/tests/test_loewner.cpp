#include <random>

#include "doctest.h"
#include "weldlab/loewner.hpp"

using namespace weldlab;

namespace {
DrivingFunction sampled(const std::function<double(double)>& f, double T, int n) {
  DrivingFunction d;
  for (int k = 0; k <= n; ++k) {
    d.t.push_back(T * k / n);
    d.lambda.push_back(f(T * k / n));
  }
  return d;
}
JordanCurve rotated_ellipse(double a, double b, double angle, double scale, cd shift) {
  CurveSpec s;
  s.kind = "fourier_loop";
  s.coef_lo = -1;
  cd r = scale * std::polar(1.0, angle);
  s.coef = {r * (a - b) / 2.0, shift, r * (a + b) / 2.0};
  return build_curve(s);
}
}  // namespace

TEST_CASE("constant driving functions grow vertical slits") {
  auto tip = drive_to_trace(sampled([](double) { return 0.0; }, 1, 10)).tip();
  CHECK(std::abs(tip - cd(0, 2)) < 1e-12);
  auto shifted = drive_to_trace(sampled([](double) { return 0.7; }, 0.25, 10)).tip();
  CHECK(std::abs(shifted - cd(0.7, 1)) < 1e-12);
}

TEST_CASE("driving round trips") {
  for (auto f : std::vector<std::function<double(double)>>{[](double) { return 0.0; }, [](double t) { return t; },
                                                           [](double t) { return std::sin(t); }}) {
    auto lam = sampled(f, 1, 200);
    auto back = trace_to_drive(drive_to_trace(lam).points);
    CHECK(back.horizon() == doctest::Approx(1).epsilon(1e-3));
    double err = 0;
    for (size_t k = 0; k < back.t.size(); ++k) err = std::max(err, std::abs(back.lambda[k] - lam(back.t[k])));
    CHECK(err < 5e-2);
  }
}

TEST_CASE("vertical segment maps out to the zero driving function") {
  std::vector<cd> seg;
  for (int k = 0; k <= 20; ++k) seg.push_back(cd(0.3, 0.1 * k));
  auto d = trace_to_drive(seg);
  CHECK(d.horizon() == doctest::Approx(1.0).epsilon(1e-12));
  for (double l : d.lambda) CHECK(l == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("driving energy closed form, sign and scaling") {
  for (double c : {-2.0, 0.5, 3.0})
    for (double T : {0.5, 2.0}) CHECK(driving_energy(sampled([c](double t) { return c * t; }, T, 37)) == doctest::Approx(c * c * T / 2).epsilon(1e-13));
  std::mt19937 rng(7);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    DrivingFunction d;
    double t = 0, l = 0;
    for (int k = 0; k < 50; ++k) {
      d.t.push_back(t);
      d.lambda.push_back(l);
      t += 0.01 + std::abs(n01(rng)) * 0.05;
      l += n01(rng) * 0.2;
    }
    double e = driving_energy(d);
    CHECK(e >= 0);
    // lambda(t) -> sqrt(s) lambda(t / s) leaves the energy unchanged
    DrivingFunction scaled = d;
    for (size_t k = 0; k < d.t.size(); ++k) {
      scaled.t[k] *= 3;
      scaled.lambda[k] *= std::sqrt(3.0);
    }
    CHECK(driving_energy(scaled) == doctest::Approx(e).epsilon(1e-12));
  }
}

TEST_CASE("malformed driving functions and chords") {
  DrivingFunction bad{{0, 0.5, 0.5}, {0, 1, 2}};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(trace_to_drive({cd(0, 1), cd(0, 2)}), ConfigError);
  CHECK_THROWS_AS(trace_to_drive({cd(0, 0), cd(0, 1), cd(1, -1)}), ConfigError);
}

TEST_CASE("circles and lines have zero energy, including their equipotentials") {
  CurveSpec c;
  c.kind = "circle";
  c.radius = 2.5;
  c.center = cd(1, 1);
  auto P = map_curve(build_curve(c), Geometry::Disk);
  CHECK(std::abs(loop_energy(P).value) < 1e-6);
  for (const auto& e : equipotentials(P, {0.1, 0.5, 0.9, 0.99})) CHECK(std::abs(e.energy.value) < 1e-6);
  CurveSpec l;
  l.kind = "graph";
  CHECK(std::abs(curve_energy(build_curve(l)).value) < 1e-6);
}

TEST_CASE("energy is invariant under similarities and inversions") {
  double base = curve_energy(rotated_ellipse(1, 0.8, 0, 1, 0)).value;
  CHECK(base > 0.1);
  CHECK(curve_energy(rotated_ellipse(1, 0.8, 0.9, 3, cd(2, -1))).value == doctest::Approx(base).epsilon(1e-6));
  auto e = rotated_ellipse(1, 0.8, 0, 1, 0);
  auto inv = apply_mobius(e, Mobius{0, 1, 1, 0});  // inversion about the center: still a loop
  CHECK(inv.is_loop());
  CHECK(curve_energy(inv).value == doctest::Approx(base).epsilon(1e-4));
  auto through = apply_mobius(e, Mobius{0, 1, 1, -e.eval(1.1)});
  CHECK(!through.is_loop());
  CHECK(curve_energy(through).value == doctest::Approx(base).epsilon(1e-4));
}

TEST_CASE("energy grows with eccentricity") {
  double prev = 0;
  for (double b : {0.95, 0.8, 0.6, 0.4}) {
    double e = curve_energy(rotated_ellipse(1, b, 0, 1, 0)).value;
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("inversion to a loop that is not star-shaped keeps the energy") {
  auto e = rotated_ellipse(1, 0.4, 0, 1, 0);
  double base = curve_energy(e).value;
  auto inv = apply_mobius(e, Mobius{0, 1, 1, cd(-0.1, -0.2)});
  auto P = map_curve(inv, Geometry::Disk);
  CHECK(P.diagnostics.at("zipper") == 1);
  CHECK(loop_energy(P).value == doctest::Approx(base).epsilon(1e-6));
}
