#include "weldlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace weldlab {

cd Mobius::operator()(cd z) const {
  if (std::isinf(z.real()) || std::isinf(z.imag())) {
    if (c == cd(0)) return {INFINITY, INFINITY};
    return a / c;
  }
  cd den = c * z + d;
  if (den == cd(0)) return {INFINITY, INFINITY};
  return (a * z + b) / den;
}

cd Mobius::deriv(cd z) const {
  cd den = c * z + d;
  return det() / (den * den);
}

Mobius Mobius::inverse() const { return {d, -b, -c, a}; }

Mobius Mobius::compose(const Mobius& m) const {
  return {a * m.a + b * m.c, a * m.b + b * m.d, c * m.a + d * m.c, c * m.b + d * m.d};
}

Mobius Mobius::cayley() { return {1, cd(0, -1), 1, cd(0, 1)}; }

namespace {
// Map sending z1, z2, z3 to 0, 1, infinity.
Mobius to_standard(cd z1, cd z2, cd z3) {
  return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}
}  // namespace

Mobius Mobius::from_points(cd z1, cd z2, cd z3, cd w1, cd w2, cd w3) {
  return to_standard(w1, w2, w3).inverse().compose(to_standard(z1, z2, z3));
}

double JordanCurve::diameter() const {
  double lo_x = INFINITY, hi_x = -INFINITY, lo_y = INFINITY, hi_y = -INFINITY;
  for (const cd& p : points) {
    lo_x = std::min(lo_x, p.real());
    hi_x = std::max(hi_x, p.real());
    lo_y = std::min(lo_y, p.imag());
    hi_y = std::max(hi_y, p.imag());
  }
  return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

cd JordanCurve::tangent(double t) const {
  double h = 1e-5 * std::max(1.0, std::abs(t));
  cd d = (eval(t + h) - eval(t - h)) / (2 * h);
  double m = std::abs(d);
  if (!(m > 0) || !std::isfinite(m)) throw ComputationError("tangent undefined at t=" + std::to_string(t));
  return d / m;
}

std::vector<double> loop_nodes(int n) {
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) t[k] = 2 * kPi * k / n;
  return t;
}

// Nodes on [-window, window], clustered near the origin through a sinh stretch.
std::vector<double> line_nodes(int n, double window) {
  const double alpha = 5.0;
  std::vector<double> t(n);
  for (int k = 0; k < n; ++k) {
    double s = -1.0 + 2.0 * k / (n - 1);
    t[k] = window * std::sinh(alpha * s) / std::sinh(alpha);
  }
  return t;
}

namespace {

long long cell_key(long long i, long long j) { return (i << 32) ^ (j & 0xffffffffLL); }

double orient(cd a, cd b, cd c) { return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real()); }

bool segments_cross(cd p1, cd p2, cd q1, cd q2, double tol) {
  double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
  double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
  double s = tol * std::max(std::abs(p2 - p1), std::abs(q2 - q1));
  return ((d1 > s && d2 < -s) || (d1 < -s && d2 > s)) && ((d3 > s && d4 < -s) || (d3 < -s && d4 > s));
}

std::vector<double> refined_arclength(const std::function<cd(double)>& eval, const std::vector<double>& t,
                                      const std::vector<cd>& pts, bool closed) {
  const int sub = 8;
  std::vector<double> s(t.size(), 0.0);
  for (size_t k = 1; k < t.size(); ++k) {
    double acc = 0;
    cd prev = pts[k - 1];
    for (int j = 1; j <= sub; ++j) {
      cd z = j == sub ? pts[k] : eval(t[k - 1] + (t[k] - t[k - 1]) * j / sub);
      acc += std::abs(z - prev);
      prev = z;
    }
    s[k] = s[k - 1] + acc;
  }
  (void)closed;
  return s;
}

}  // namespace

bool polyline_simple(const std::vector<cd>& pts, bool closed, double tol) {
  size_t n = pts.size();
  if (n < 3) return true;
  size_t nseg = closed ? n : n - 1;
  double len = 0;
  for (size_t k = 0; k < nseg; ++k) len += std::abs(pts[(k + 1) % n] - pts[k]);
  double cell = std::max(len / nseg, 1e-12) * 2;
  std::unordered_map<long long, std::vector<size_t>> grid;
  auto cells_of = [&](size_t k, auto&& fn) {
    cd p = pts[k], q = pts[(k + 1) % n];
    long long i0 = (long long)std::floor(std::min(p.real(), q.real()) / cell);
    long long i1 = (long long)std::floor(std::max(p.real(), q.real()) / cell);
    long long j0 = (long long)std::floor(std::min(p.imag(), q.imag()) / cell);
    long long j1 = (long long)std::floor(std::max(p.imag(), q.imag()) / cell);
    for (long long i = i0; i <= i1; ++i)
      for (long long j = j0; j <= j1; ++j) fn(cell_key(i, j));
  };
  for (size_t k = 0; k < nseg; ++k) {
    // far tail segments of curves through infinity would touch too many cells; they are straight
    if (std::abs(pts[(k + 1) % n] - pts[k]) > 4096 * cell) continue;
    cells_of(k, [&](long long key) { grid[key].push_back(k); });
  }
  for (auto& [key, segs] : grid) {
    for (size_t x = 0; x < segs.size(); ++x)
      for (size_t y = x + 1; y < segs.size(); ++y) {
        size_t i = segs[x], j = segs[y];
        size_t gap = i > j ? i - j : j - i;
        if (gap <= 1 || (closed && gap == nseg - 1)) continue;
        if (segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n], tol)) return false;
      }
  }
  return true;
}

JordanCurve make_curve(CurveKind kind, std::string tag, std::function<cd(double)> eval, std::vector<double> params) {
  JordanCurve c;
  c.kind = kind;
  c.tag = std::move(tag);
  c.eval = std::move(eval);
  c.params = std::move(params);
  c.points.resize(c.params.size());
  for (size_t k = 0; k < c.params.size(); ++k) c.points[k] = c.eval(c.params[k]);
  for (size_t k = 1; k < c.params.size(); ++k)
    if (!(c.params[k] > c.params[k - 1])) throw ConfigError("curve parameters are not strictly increasing");
  for (size_t k = 1; k < c.points.size(); ++k)
    if (c.points[k] == c.points[k - 1]) throw ConfigError("repeated curve samples");
  c.arclength = refined_arclength(c.eval, c.params, c.points, c.is_loop());
  if (!polyline_simple(c.points, c.is_loop(), 1e-9)) throw ConfigError("sample polyline self-intersects");
  return c;
}

namespace {

std::function<cd(double)> trig_interpolant(const std::vector<cd>& s) {
  // coefficients by direct DFT; sample sets are small
  int n = (int)s.size();
  std::vector<cd> c(n);
  for (int k = 0; k < n; ++k) {
    cd acc = 0;
    for (int j = 0; j < n; ++j) acc += s[j] * std::polar(1.0, -2 * kPi * double(k) * j / n);
    c[k] = acc / double(n);
  }
  return [c, n](double t) {
    cd z = 0;
    for (int k = 0; k < n; ++k) {
      int f = k <= n / 2 ? k : k - n;
      double w = (n % 2 == 0 && k == n / 2) ? 0.5 : 1.0;
      z += w * c[k] * std::polar(1.0, f * t);
      if (w == 0.5) z += w * c[k] * std::polar(1.0, -f * t);
    }
    return z;
  };
}

std::function<cd(double)> open_interpolant(const std::vector<cd>& s) {
  std::vector<double> t(s.size(), 0.0);
  for (size_t k = 1; k < s.size(); ++k) t[k] = t[k - 1] + std::abs(s[k] - s[k - 1]);
  double mid = t.back() / 2;
  for (double& x : t) x -= mid;
  return [s, t](double x) {
    if (x <= t.front()) return s.front() + (s[1] - s[0]) / (t[1] - t[0]) * (x - t.front());
    if (x >= t.back()) {
      size_t n = s.size();
      return s.back() + (s[n - 1] - s[n - 2]) / (t[n - 1] - t[n - 2]) * (x - t.back());
    }
    size_t k = std::upper_bound(t.begin(), t.end(), x) - t.begin();
    double w = (x - t[k - 1]) / (t[k] - t[k - 1]);
    return s[k - 1] * (1 - w) + s[k] * w;
  };
}

}  // namespace

JordanCurve build_curve(const CurveSpec& spec) {
  int n = spec.samples_n;
  if (spec.kind.empty()) throw ConfigError("empty curve specification");
  if (n < 8) throw ConfigError("samples_n must be at least 8");
  if (spec.kind == "circle") {
    if (!(spec.radius > 0)) throw ConfigError("circle radius must be positive");
    cd c0 = spec.center;
    double r = spec.radius;
    auto c = make_curve(CurveKind::BoundedLoop, "circle", [c0, r](double t) { return c0 + std::polar(r, t); }, loop_nodes(n));
    c.meta["radius"] = r;
    return c;
  }
  if (spec.kind == "ellipse") {
    if (!(spec.a > 0 && spec.b > 0)) throw ConfigError("ellipse semi-axes must be positive");
    cd c0 = spec.center;
    double a = spec.a, b = spec.b;
    auto c = make_curve(CurveKind::BoundedLoop, "ellipse", [c0, a, b](double t) { return c0 + cd(a * std::cos(t), b * std::sin(t)); }, loop_nodes(n));
    c.meta["a"] = a;
    c.meta["b"] = b;
    return c;
  }
  if (spec.kind == "fourier_loop") {
    if (spec.coef.empty()) throw ConfigError("fourier_loop needs coefficients");
    auto coef = spec.coef;
    int lo = spec.coef_lo;
    return make_curve(CurveKind::BoundedLoop, "fourier_loop", [coef, lo](double t) {
      cd z = 0;
      for (size_t k = 0; k < coef.size(); ++k) z += coef[k] * std::polar(1.0, (lo + (int)k) * t);
      return z;
    }, loop_nodes(n));
  }
  if (spec.kind == "graph") {
    auto bumps = spec.bumps;
    for (const auto& b : bumps)
      if (!(b.sigma > 0)) throw ConfigError("bump sigma must be positive");
    double w = spec.window > 0 ? spec.window : kEscapeRadius;
    auto c = make_curve(CurveKind::ThroughInfinity, "graph", [bumps](double x) {
      double y = 0;
      for (const auto& b : bumps) {
        double d = (x - b.center) / b.sigma;
        y += b.a * std::exp(-0.5 * d * d);
      }
      return cd(x, y);
    }, line_nodes(n, w));
    return c;
  }
  if (spec.kind == "samples") {
    if (spec.samples.size() < 4) throw ConfigError("samples curve needs at least 4 points");
    if (spec.samples_closed) {
      return make_curve(CurveKind::BoundedLoop, "samples", trig_interpolant(spec.samples), loop_nodes(n));
    }
    auto ev = open_interpolant(spec.samples);
    double len = 0;
    for (size_t k = 1; k < spec.samples.size(); ++k) len += std::abs(spec.samples[k] - spec.samples[k - 1]);
    double w = std::max(kEscapeRadius, len / 2);
    return make_curve(CurveKind::ThroughInfinity, "samples", ev, line_nodes(n, w));
  }
  throw ConfigError("unknown curve kind: " + spec.kind);
}

namespace {

// Periodic parametrization over [0, 2pi); curves through infinity send theta = 0 to infinity.
std::function<cd(double)> periodic_eval(const JordanCurve& c) {
  if (c.is_loop()) return c.eval;
  auto ev = c.eval;
  return [ev](double th) {
    double r = std::fmod(th, 2 * kPi);
    if (r < 0) r += 2 * kPi;
    if (r == 0.0) return cd(INFINITY, INFINITY);
    return ev(std::tan((r - kPi) / 2));
  };
}

double golden_min(const std::function<double(double)>& f, double a, double b) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1; x1 = b - g * (b - a); f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2; x2 = a + g * (b - a); f2 = f(x2);
    }
  }
  return (a + b) / 2;
}

}  // namespace

double param_of_point(const JordanCurve& curve, cd point) {
  size_t n = curve.size(), kb = 0;
  double best = INFINITY;
  for (size_t k = 0; k < n; ++k) {
    double d = std::norm(curve.points[k] - point);
    if (d < best) { best = d; kb = k; }
  }
  auto dist = [&](double t) { return std::abs(curve.eval(t) - point); };
  const auto& t = curve.params;
  double lo, hi;
  if (curve.is_loop()) {
    double h = 2 * kPi / n;
    lo = t[kb] - h;
    hi = t[kb] + h;
  } else if (kb == 0 || kb == n - 1) {
    // beyond the sampled window the curve continues straight; search outward
    double span = t[n - 1] - t[0];
    lo = kb == 0 ? t[0] - 1e3 * span : t[n - 2];
    hi = kb == 0 ? t[1] : t[n - 1] + 1e3 * span;
  } else {
    lo = t[kb - 1];
    hi = t[kb + 1];
  }
  double r = golden_min(dist, lo, hi);
  if (curve.is_loop()) r = std::fmod(std::fmod(r, 2 * kPi) + 2 * kPi, 2 * kPi);
  return r;
}

JordanCurve apply_mobius(const JordanCurve& curve, const Mobius& m, int samples_n) {
  if (std::abs(m.det()) < 1e-14) throw ConfigError("degenerate Mobius transform");
  int n = samples_n > 0 ? samples_n : (int)curve.size();
  double diam = std::max(curve.diameter(), 1.0);
  if (!curve.is_loop() && m.affine()) {
    auto ev = curve.eval;
    auto out = make_curve(CurveKind::ThroughInfinity, "mobius", [ev, m](double t) { return m(ev(t)); }, curve.params);
    out.meta = curve.meta;
    return out;
  }
  auto P = periodic_eval(curve);
  // locate the preimage of infinity on the curve, if any
  bool has_pole = false;
  double th_p = 0;
  if (m.affine()) {
    has_pole = !curve.is_loop();
  } else {
    cd pole = m.pole();
    const int dense = 8192;
    double best = INFINITY;
    int kbest = 0;
    for (int k = 0; k < dense; ++k) {
      double th = 2 * kPi * k / dense;
      cd z = P(th);
      if (!std::isfinite(z.real())) continue;
      double d = std::abs(z - pole);
      if (d < best) { best = d; kbest = k; }
    }
    double h = 2 * kPi / dense;
    th_p = golden_min([&](double th) { return std::abs(P(th) - pole); }, (kbest - 1) * h, (kbest + 1) * h);
    has_pole = std::abs(P(th_p) - pole) < 1e-9 * diam;
  }
  if (!has_pole) {
    auto out = make_curve(CurveKind::BoundedLoop, "mobius", [P, m](double th) { return m(P(th)); }, loop_nodes(n));
    if (!curve.is_loop()) out.meta["param_infinity"] = 0.0;
    return out;
  }
  auto ev = [P, m, th_p](double s) { return m(P(th_p + kPi + 2 * std::atan(s))); };
  double w = 1.0;
  while (w < 1e12 && (std::abs(ev(w)) < kEscapeRadius || std::abs(ev(-w)) < kEscapeRadius)) w *= 2;
  auto out = make_curve(CurveKind::ThroughInfinity, "mobius", ev, line_nodes(n, w));
  out.meta["param_shift"] = th_p;
  return out;
}

double BoundaryFunction::at(double x) const {
  if (eval) return eval(x);
  if (nodes.empty()) throw ComputationError("empty boundary function");
  if (x <= nodes.front()) return values.front();
  if (x >= nodes.back()) return values.back();
  size_t k = std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin();
  double w = (x - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
  return values[k - 1] * (1 - w) + values[k] * w;
}

BoundaryFunction winding(const JordanCurve& curve) {
  BoundaryFunction bf;
  bf.carrier = Carrier::Curve;
  bf.nodes = curve.params;
  bf.arclength = curve.arclength;
  bf.values.resize(curve.size());
  bf.valid.assign(curve.size(), true);
  double prev = 0;
  for (size_t k = 0; k < curve.size(); ++k) {
    double a = std::arg(curve.tangent(curve.params[k]));
    if (k > 0) {
      double jump = std::remainder(a - prev, 2 * kPi);
      if (std::abs(jump) > kPi / 2) throw ComputationError("winding unwrap failed: resolution too coarse");
      a = prev + jump;
    }
    bf.values[k] = a;
    prev = a;
  }
  auto c = curve;
  auto nodes = bf.nodes;
  auto vals = bf.values;
  // exact evaluator: tangent angle on the branch of the nearest node
  bf.eval = [c, nodes, vals](double t) {
    size_t k = std::lower_bound(nodes.begin(), nodes.end(), t) - nodes.begin();
    if (k >= nodes.size()) k = nodes.size() - 1;
    double ref = vals[k];
    double a = std::arg(c.tangent(t));
    return ref + std::remainder(a - ref, 2 * kPi);
  };
  return bf;
}

double IdentityReport::rhs_sum() const {
  double s = 0;
  for (const auto& [name, v] : rhs) s += v;
  return s;
}

void IdentityReport::finalize() {
  residual = lhs - rhs_sum();
  relative = std::abs(residual) / std::max(1.0, std::abs(lhs));
}

}  // namespace weldlab
