#include "doctest.h"
#include "weldlab/series.hpp"

using namespace weldlab;

namespace {
std::vector<double> cos_samples(int k, int n, double phase = 0) {
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = std::cos(k * 2 * kPi * j / n + phase);
  return v;
}
}  // namespace

TEST_CASE("fft round trip and known coefficients") {
  std::vector<cd> x{1, cd(2, 1), -3, cd(0, 4), 5, 0.5};
  auto y = x;
  fft(y, -1);
  fft(y, +1);
  for (size_t i = 0; i < x.size(); ++i) CHECK(std::abs(y[i] / 6.0 - x[i]) < 1e-13);
  auto c = fourier(cos_samples(3, 64));
  CHECK(std::abs(c[3] - 0.5) < 1e-14);
  CHECK(std::abs(c[61] - 0.5) < 1e-14);
  CHECK(std::abs(c[0]) < 1e-14);
}

TEST_CASE("laurent evaluation, derivative and ring values") {
  Laurent s{-2, {cd(1, 1), 2, 3, cd(0, -1), 0.5}};
  cd z(0.7, -0.4);
  cd direct = 0;
  for (int p = -2; p <= 2; ++p) direct += s.coef(p) * std::pow(z, p);
  CHECK(std::abs(s(z) - direct) < 1e-13);
  cd h = 1e-6;
  CHECK(std::abs(s.deriv()(z) - (s(z + h) - s(z - h)) / (2.0 * h)) < 1e-7);
  auto ring = s.ring(0.8, 16);
  for (int k = 0; k < 16; ++k) CHECK(std::abs(ring[k] - s(std::polar(0.8, 2 * kPi * k / 16))) < 1e-12);
  auto back = Laurent::from_boundary(s.ring(1.0, 16), -2, 2);
  for (int p = -2; p <= 2; ++p) CHECK(std::abs(back.coef(p) - s.coef(p)) < 1e-13);
}

TEST_CASE("log series matches the Taylor series of log(1 + z/2)") {
  const int n = 128;
  std::vector<cd> b(n);
  for (int k = 0; k < n; ++k) b[k] = 1.0 + 0.5 * std::polar(1.0, 2 * kPi * k / n);
  auto L = log_series(b, false);
  CHECK(std::abs(L.coef(0)) < 1e-14);
  for (int k = 1; k <= 20; ++k) CHECK(std::abs(L.coef(k) - (k % 2 ? 1.0 : -1.0) * std::pow(0.5, k) / k) < 1e-13);
  std::vector<cd> winding(n);
  for (int k = 0; k < n; ++k) winding[k] = std::polar(1.0, 2 * kPi * k / n);
  CHECK_THROWS_AS(log_series(winding, false), ComputationError);
}

TEST_CASE("series energy of powers") {
  for (int k = 1; k <= 6; ++k) {
    Laurent zk{k, {1.0}};
    CHECK(series_energy(zk) == doctest::Approx(k));
    Laurent inv{-k, {1.0}};
    CHECK(series_energy(inv) == doctest::Approx(k));
  }
}

TEST_CASE("spectral conjugate, derivative and seminorm of trigonometric data") {
  const int n = 256;
  for (int k = 1; k <= 8; ++k) {
    auto c = periodic_conjugate(cos_samples(k, n));
    auto d = periodic_derivative(cos_samples(k, n));
    for (int j = 0; j < n; j += 7) {
      double t = 2 * kPi * j / n;
      CHECK(c[j] == doctest::Approx(std::sin(k * t)).epsilon(1e-12).scale(1));
      CHECK(d[j] == doctest::Approx(-k * std::sin(k * t)).epsilon(1e-12).scale(1));
    }
    CHECK(h12_spectral(cos_samples(k, n, 0.3)) == doctest::Approx(k).epsilon(1e-12));
  }
}

TEST_CASE("harmonic series and trigonometric interpolant") {
  const int n = 64;
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) {
    double t = 2 * kPi * j / n;
    v[j] = 1 + std::cos(2 * t) - 0.5 * std::sin(3 * t);
  }
  auto H = harmonic_series(v);
  cd w = std::polar(0.6, 0.9);
  double exact = 1 + std::real(w * w) - 0.5 * std::imag(w * w * w);
  CHECK(H(w).real() == doctest::Approx(exact).epsilon(1e-13));
  CHECK(std::abs(H(0.0).imag()) < 1e-15);
  auto co = fourier(v);
  CHECK(trig_eval(co, 0.123) == doctest::Approx(1 + std::cos(0.246) - 0.5 * std::sin(0.369)).epsilon(1e-13));
}

TEST_CASE("combine adds over the union of powers") {
  Laurent a{0, {1, 2}}, b{-1, {3, 4}};
  auto c = combine(a, 2, b, -1);
  CHECK(c.lo == -1);
  CHECK(std::abs(c.coef(-1) + 3.0) < 1e-15);
  CHECK(std::abs(c.coef(0) - (2.0 - 4.0)) < 1e-15);
  CHECK(std::abs(c.coef(1) - 4.0) < 1e-15);
}
