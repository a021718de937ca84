#include "weldlab/series.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace weldlab {

namespace {

struct PlanCache {
  std::mutex mu;
  std::map<std::pair<int, int>, fftw_plan> plans;
  ~PlanCache() {
    for (auto& [k, p] : plans) fftw_destroy_plan(p);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan plan_for(int n, int sign) {
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto key = std::make_pair(n, sign);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;
  auto* buf = fftw_alloc_complex(n);
  fftw_plan p = fftw_plan_dft_1d(n, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(buf);
  c.plans[key] = p;
  return p;
}

}  // namespace

void fft(std::vector<cd>& data, int sign) {
  int n = (int)data.size();
  if (n == 0) return;
  fftw_plan p = plan_for(n, sign);
  auto* buf = fftw_alloc_complex(n);
  std::memcpy(buf, data.data(), sizeof(cd) * n);
  fftw_execute_dft(p, buf, buf);
  std::memcpy(reinterpret_cast<double*>(data.data()), buf, sizeof(cd) * n);
  fftw_free(buf);
}

std::vector<cd> fourier(const std::vector<cd>& samples) {
  std::vector<cd> c = samples;
  fft(c, -1);
  for (auto& x : c) x /= double(samples.size());
  return c;
}

std::vector<cd> fourier(const std::vector<double>& samples) {
  return fourier(std::vector<cd>(samples.begin(), samples.end()));
}

cd Laurent::operator()(cd z) const {
  cd pos = 0, neg = 0;
  int h = hi();
  for (int p = h; p >= std::max(lo, 0); --p) pos = pos * z + coef(p);
  if (lo > 0) pos *= std::pow(z, lo);
  if (lo < 0) {
    cd iz = 1.0 / z;
    for (int p = lo; p <= std::min(h, -1); ++p) neg = neg * iz + coef(p);
    neg *= iz;
    if (h < -1) neg *= std::pow(iz, -h - 1);
  }
  return pos + neg;
}

Laurent Laurent::deriv() const {
  Laurent d;
  d.lo = lo - 1;
  d.c.resize(c.size());
  for (size_t j = 0; j < c.size(); ++j) d.c[j] = c[j] * double(lo + (int)j);
  // a power series stays a power series, so it can still be evaluated at 0
  if (lo == 0 && !d.c.empty()) {
    d.c.erase(d.c.begin());
    d.lo = 0;
  }
  return d;
}

std::vector<cd> Laurent::ring(double r, int n) const {
  std::vector<cd> b(n, cd(0));
  for (size_t j = 0; j < c.size(); ++j) {
    int p = lo + (int)j;
    int m = ((p % n) + n) % n;
    b[m] += c[j] * std::pow(r, p);
  }
  fft(b, +1);
  return b;
}

Laurent Laurent::from_boundary(const std::vector<cd>& samples, int lo, int hi) {
  int n = (int)samples.size();
  if (hi - lo >= n) throw ComputationError("series range exceeds sample count");
  auto co = fourier(samples);
  Laurent s;
  s.lo = lo;
  s.c.resize(hi - lo + 1);
  for (int p = lo; p <= hi; ++p) s.c[p - lo] = co[((p % n) + n) % n];
  return s;
}

double Laurent::leakage(const std::vector<cd>& samples, int lo, int hi) {
  int n = (int)samples.size();
  auto co = fourier(samples);
  double in = 0, out = 0;
  for (int k = 0; k < n; ++k) {
    int f = freq(k, n);
    double a = std::abs(co[k]);
    if (f >= lo && f <= hi) in = std::max(in, a);
    else out = std::max(out, a);
  }
  return in > 0 ? out / in : out;
}

Laurent combine(const Laurent& a, double wa, const Laurent& b, double wb) {
  if (a.c.empty()) {
    Laurent r = b;
    for (auto& x : r.c) x *= wb;
    return r;
  }
  if (b.c.empty()) {
    Laurent r = a;
    for (auto& x : r.c) x *= wa;
    return r;
  }
  Laurent r;
  r.lo = std::min(a.lo, b.lo);
  int hi = std::max(a.hi(), b.hi());
  r.c.resize(hi - r.lo + 1);
  for (int p = r.lo; p <= hi; ++p) r.c[p - r.lo] = wa * a.coef(p) + wb * b.coef(p);
  return r;
}

Laurent log_series(const std::vector<cd>& boundary, bool exterior) {
  int n = (int)boundary.size();
  std::vector<cd> lg(n);
  double prev = std::arg(boundary[0]);
  for (int k = 0; k < n; ++k) {
    if (boundary[k] == cd(0)) throw ComputationError("log of a vanishing function");
    double a = std::arg(boundary[k]);
    if (k > 0) a = prev + std::remainder(a - prev, 2 * kPi);
    lg[k] = cd(std::log(std::abs(boundary[k])), a);
    prev = a;
  }
  double wrap = std::remainder(std::arg(boundary[0]) - prev, 2 * kPi) + prev - lg[0].imag();
  if (std::abs(wrap) > 1e-6) throw ComputationError("function winds around zero on the boundary");
  return exterior ? Laurent::from_boundary(lg, -(n / 2 - 1), 0) : Laurent::from_boundary(lg, 0, n / 2 - 1);
}

double series_energy(const Laurent& s) {
  double e = 0;
  for (size_t j = 0; j < s.c.size(); ++j) e += std::abs(double(s.lo + (int)j)) * std::norm(s.c[j]);
  return e;
}

double h12_spectral(const std::vector<double>& samples) {
  auto c = fourier(samples);
  int n = (int)c.size();
  double e = 0;
  for (int k = 1; k < n; ++k) e += std::abs(freq(k, n)) * std::norm(c[k]);
  return 2 * e;
}

std::vector<double> periodic_conjugate(const std::vector<double>& samples) {
  auto c = fourier(samples);
  int n = (int)c.size();
  for (int k = 0; k < n; ++k) {
    int f = freq(k, n);
    if (f == 0 || (n % 2 == 0 && k == n / 2)) c[k] = 0;
    else c[k] *= cd(0, f > 0 ? -1 : 1);
  }
  fft(c, +1);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = c[k].real();
  return out;
}

std::vector<double> periodic_derivative(const std::vector<double>& samples) {
  auto c = fourier(samples);
  int n = (int)c.size();
  for (int k = 0; k < n; ++k) {
    int f = freq(k, n);
    if (n % 2 == 0 && k == n / 2) c[k] = 0;
    else c[k] *= cd(0, f);
  }
  fft(c, +1);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = c[k].real();
  return out;
}

Laurent harmonic_series(const std::vector<double>& samples) {
  auto c = fourier(samples);
  int n = (int)c.size();
  Laurent s;
  s.lo = 0;
  s.c.resize(n / 2);
  s.c[0] = c[0].real();
  for (int k = 1; k < n / 2; ++k) s.c[k] = 2.0 * c[k];
  return s;
}

double trig_eval(const std::vector<cd>& coeffs, double theta) {
  int n = (int)coeffs.size();
  double v = 0;
  for (int k = 0; k < n; ++k) {
    int f = freq(k, n);
    if (n % 2 == 0 && k == n / 2) v += coeffs[k].real() * std::cos(f * theta);
    else v += (coeffs[k] * std::polar(1.0, f * theta)).real();
  }
  return v;
}

}  // namespace weldlab
