#include "doctest.h"
#include "weldlab/dirichlet.hpp"

using namespace weldlab;

namespace {
ScalarField re_power(int k) {
  ScalarField f;
  f.value = [k](cd z) { return std::real(std::pow(z, k)); };
  f.grad = [k](cd z) { return std::conj(double(k) * std::pow(z, k - 1)); };
  return f;
}
std::vector<double> cos_samples(int k, int n) {
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = std::cos(k * 2 * kPi * j / n);
  return v;
}
}  // namespace

TEST_CASE("douglas identity for cos k theta on three paths") {
  for (int k = 1; k <= 8; ++k) {
    SideField s;
    s.phi = re_power(k);
    CHECK(std::abs(dirichlet_energy(s).value - k) < 1e-3);
    CHECK(std::abs(h12_seminorm_spectral(cos_samples(k, 512)) - k) < 1e-6);
    std::vector<cd> pts;
    for (int j = 0; j < 512; ++j) pts.push_back(std::polar(1.0, 2 * kPi * j / 512));
    CHECK(std::abs(h12_seminorm(pts, cos_samples(k, 512), true) - k) < 1e-3 * k);
  }
}

TEST_CASE("exterior disk energy of Re 1/z^k") {
  for (int k : {1, 3}) {
    SideField s;
    s.exterior = true;
    ScalarField f;
    f.value = [k](cd z) { return std::real(std::pow(z, -k)); };
    f.grad = [k](cd z) { return std::conj(-double(k) * std::pow(z, -k - 1)); };
    s.phi = f;
    CHECK(dirichlet_energy(s).value == doctest::Approx(k).epsilon(1e-4));
  }
}

TEST_CASE("plane energy of gaussian bumps matches the closed form") {
  std::vector<Bump2D> b{{0.7, cd(0.5, 0.3), 0.4}, {-0.4, cd(-1, -0.5), 0.8}};
  auto phi = gaussian_bumps(b);
  CHECK(dirichlet_energy_plane(phi) == doctest::Approx(gaussian_bumps_energy(b)).epsilon(1e-6));
  std::vector<Bump2D> one{{1.0, 0.0, 0.5}};
  // a single bump a exp(-r^2 / 2 sigma^2) has energy a^2 whatever its width
  CHECK(gaussian_bumps_energy(one) == doctest::Approx(1.0));
  CHECK(dirichlet_energy_plane(gaussian_bumps(one)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("energy is conformally invariant across a curve") {
  CurveSpec s;
  s.kind = "ellipse";
  s.a = 1;
  s.b = 0.7;
  auto P = map_curve(build_curve(s), Geometry::Disk);
  std::vector<Bump2D> b{{0.6, cd(0.2, -0.1), 0.5}};
  CHECK(dirichlet_energy_plane(gaussian_bumps(b), P) == doctest::Approx(gaussian_bumps_energy(b)).epsilon(1e-5));
}

TEST_CASE("poisson extension of trigonometric data") {
  auto in = poisson_extend(cos_samples(3, 256), false);
  auto out = poisson_extend(cos_samples(3, 256), true);
  cd w = std::polar(0.5, 0.4);
  CHECK(in.value(w) == doctest::Approx(std::pow(0.5, 3) * std::cos(1.2)).epsilon(1e-12));
  CHECK(out.value(1.0 / std::conj(w)) == doctest::Approx(std::pow(0.5, 3) * std::cos(1.2)).epsilon(1e-12));
  CHECK(in.energy() == doctest::Approx(3).epsilon(1e-12));
  CHECK(out.energy() == doctest::Approx(3).epsilon(1e-12));
}

TEST_CASE("harmonic conjugates") {
  auto u = poisson_extend(cos_samples(2, 128), false);
  auto v = harmonic_conjugate(u);
  cd w(0.3, 0.4);
  CHECK(v.value(w) == doctest::Approx(std::imag(w * w)).epsilon(1e-12));
  auto vf = harmonic_conjugate(re_power(3));
  CHECK(vf.value(w) == doctest::Approx(std::imag(w * w * w)).epsilon(1e-6));
}

TEST_CASE("traces of continuous and jumping fields") {
  std::vector<cd> pts{cd(-0.5, 0), cd(0, 0), cd(0.7, 0)};
  std::vector<cd> tan(3, cd(1, 0));
  auto smooth = [](cd z) { return std::exp(-std::norm(z - cd(0.1, 0.2))) + z.real(); };
  auto t = trace(smooth, pts, tan, TraceSide::Both, 1.0);
  for (size_t k = 0; k < pts.size(); ++k) {
    CHECK(t.values[k] == doctest::Approx(smooth(pts[k])).epsilon(1e-6));
    CHECK(t.valid[k]);
  }
  auto step = [](cd z) { return z.imag() > 0 ? 1.0 : 0.0; };
  auto both = trace(step, pts, tan, TraceSide::Both, 1.0);
  auto left = trace(step, pts, tan, TraceSide::Interior, 1.0);
  auto right = trace(step, pts, tan, TraceSide::Exterior, 1.0);
  for (size_t k = 0; k < pts.size(); ++k) {
    CHECK(both.values[k] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(left.values[k] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(right.values[k] == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("decomposition is orthogonal") {
  SideField s;
  auto phi = gaussian_bumps({{0.8, cd(0.3, 0.1), 0.3}});
  s.phi = phi;
  auto d = decompose(s);
  CHECK(d.energy_total == doctest::Approx(d.energy_zero + d.energy_harmonic).epsilon(1e-6));
  for (double b : d.zero_trace.boundary(64)) CHECK(std::abs(b) < 1e-9);
}

TEST_CASE("curvature action of constants") {
  SideField in, out;
  in.phi = constant_field(0.25);
  out.phi = constant_field(0.25);
  out.exterior = true;
  CHECK(curvature_action(in) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(curvature_action(out) == doctest::Approx(-1.0).epsilon(1e-12));
}
