#include "weldlab/conformal.hpp"

#include <algorithm>
#include <boost/math/interpolators/makima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "zipper.hpp"

namespace weldlab {

namespace {

double root_in(const std::function<double(double)>& fn, double a, double b) {
  double fa = fn(a), fb = fn(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa > 0) == (fb > 0)) return std::abs(fa) < std::abs(fb) ? a : b;
  boost::uintmax_t it = 100;
  auto r = boost::math::tools::toms748_solve(fn, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), it);
  return (r.first + r.second) / 2;
}

Laurent rotate(const Laurent& s, double alpha) {
  Laurent r = s;
  for (size_t j = 0; j < r.c.size(); ++j) r.c[j] *= std::polar(1.0, (s.lo + (int)j) * alpha);
  return r;
}

double wrap_pi(double a) {
  double r = std::remainder(a, 2 * kPi);
  return r <= -kPi ? r + 2 * kPi : r;
}

// Angle phi with S(e^{i phi}) closest to target, refined on the tangential projection.
double circle_preimage(const Laurent& S, const Laurent& dS, const std::vector<cd>& dense, cd target) {
  int nd = (int)dense.size();
  int kb = 0;
  double best = INFINITY;
  for (int k = 0; k < nd; ++k) {
    double d = std::norm(dense[k] - target);
    if (d < best) { best = d; kb = k; }
  }
  double h = 2 * kPi / nd;
  auto proj = [&](double phi) {
    cd w = std::polar(1.0, phi);
    return (std::conj(dS(w) * cd(0, 1) * w) * (S(w) - target)).real();
  };
  return root_in(proj, (kb - 1) * h, (kb + 1) * h);
}

std::vector<cd> dense_ring(const Laurent& S, int n) { return S.ring(1.0, n); }

double tail_ratio(const Laurent& s) {
  double mx = 0, tail = 0;
  int n = (int)s.c.size();
  for (int j = 0; j < n; ++j) {
    int p = std::abs(s.lo + j);
    double a = std::abs(s.c[j]);
    if (p >= 1) mx = std::max(mx, a);
    if (p >= (3 * n) / 4) tail = std::max(tail, a);
  }
  return mx > 0 ? tail / mx : 0;
}

double signed_area(const std::vector<cd>& p) {
  double A = 0;
  for (size_t k = 0; k < p.size(); ++k) {
    cd a = p[k], b = p[(k + 1) % p.size()];
    A += a.real() * b.imag() - b.real() * a.imag();
  }
  return A / 2;
}

cd area_centroid(const std::vector<cd>& p) {
  double A = 0, cx = 0, cy = 0;
  size_t n = p.size();
  for (size_t k = 0; k < n; ++k) {
    cd a = p[k], b = p[(k + 1) % n];
    double cr = a.real() * b.imag() - b.real() * a.imag();
    A += cr;
    cx += (a.real() + b.real()) * cr;
    cy += (a.imag() + b.imag()) * cr;
  }
  return {cx / (3 * A), cy / (3 * A)};
}

// winding number of a closed polygon around p
int polygon_winding(const std::vector<cd>& poly, cd p) {
  double total = 0;
  for (size_t k = 0; k < poly.size(); ++k)
    total += std::arg((poly[(k + 1) % poly.size()] - p) / (poly[k] - p));
  return (int)std::lround(total / (2 * kPi));
}

double polygon_distance(const std::vector<cd>& poly, cd p) {
  double d = INFINITY;
  for (size_t k = 0; k < poly.size(); ++k) {
    cd a = poly[k], b = poly[(k + 1) % poly.size()];
    double t = std::clamp(((p - a) * std::conj(b - a)).real() / std::norm(b - a), 0.0, 1.0);
    d = std::min(d, std::abs(p - a - t * (b - a)));
  }
  return d;
}

// centroid when it lies inside, otherwise the grid point deepest inside the loop
cd interior_point(const std::vector<cd>& poly) {
  cd c = area_centroid(poly);
  if (polygon_winding(poly, c) == 1) return c;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (cd p : poly) {
    x0 = std::min(x0, p.real()), x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag()), y1 = std::max(y1, p.imag());
  }
  const int m = 64;
  cd best = c;
  double depth = -1;
  for (int i = 1; i < m; ++i)
    for (int j = 1; j < m; ++j) {
      cd p(x0 + (x1 - x0) * i / m, y0 + (y1 - y0) * j / m);
      if (polygon_winding(poly, p) != 1) continue;
      double d = polygon_distance(poly, p);
      if (d > depth) { depth = d; best = p; }
    }
  if (depth < 0) throw ComputationError("no interior point found for the loop");
  return best;
}

struct SidePair {
  Laurent F, G;
  int n;
  int iterations;
  double correction;
  std::string backend = "theodorsen";
  double tail = 0;  // relative size of the highest retained coefficients
};

// loop parameter as a function of the circle angle, from an increasing correspondence
std::vector<double> resample_param(const std::vector<double>& angle, const std::vector<double>& param, int n) {
  int m = (int)angle.size(), pad = 4;
  std::vector<double> x, y;
  for (int k = m - pad; k < m; ++k) x.push_back(angle[k] - 2 * kPi), y.push_back(param[k] - 2 * kPi);
  for (int k = 0; k < m; ++k) x.push_back(angle[k]), y.push_back(param[k]);
  for (int k = 0; k < pad; ++k) x.push_back(angle[k] + 2 * kPi), y.push_back(param[k] + 2 * kPi);
  boost::math::interpolators::makima<std::vector<double>> interp{std::move(x), std::move(y)};
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = interp(2 * kPi * j / n);
  return out;
}

// geodesic zipper through the loop samples; used when the correspondence iteration fails
SidePair zipper_both(const std::function<cd(double)>& loop, const MapOptions& opt) {
  int n = opt.boundary_n > 0 ? opt.boundary_n : 1024;
  for (;;) {
    auto zc = detail::zipper_correspondence(loop, 2 * n);
    auto s_in = resample_param(zc.angle_in, zc.param, n);
    auto s_out = resample_param(zc.angle_out, zc.param, n);
    std::vector<cd> fb(n), gb(n);
    for (int j = 0; j < n; ++j) {
      fb[j] = loop(s_in[j]);
      gb[j] = loop(s_out[j]);
    }
    Laurent F = Laurent::from_boundary(fb, 0, n / 2 - 1);
    Laurent G = Laurent::from_boundary(gb, -(n / 2 - 2), 1);
    // same normalization as the iteration: f'(0) > 0 and g(w) ~ c w with c > 0
    F = rotate(F, -std::arg(F.coef(1)));
    G = rotate(G, -std::arg(G.coef(1)));
    double tail = std::max(tail_ratio(F), tail_ratio(G));
    if (tail < 1e-9 || opt.boundary_n > 0 || n >= 8192) return {F, G, n, 0, 0.0, "zipper", tail};
    n *= 2;
  }
}

// Interior map around 0 and exterior map of a loop given by a periodic evaluator.
SidePair solve_both(const std::function<cd(double)>& loop, const MapOptions& opt) {
  int n = opt.boundary_n > 0 ? opt.boundary_n : 1024;
  if (opt.zipper_only) return zipper_both(loop, opt);
  for (;;) {
    TheodorsenResult in, out;
    try {
      in = theodorsen(loop, n, opt);
      auto inv = [&loop](double s) { return 1.0 / loop(-s); };
      out = theodorsen(inv, n, opt);
    } catch (const ComputationError&) {
      return zipper_both(loop, opt);
    }
    Laurent F = Laurent::from_boundary(in.boundary, 0, n / 2 - 1);
    std::vector<cd> gb(n);
    for (int k = 0; k < n; ++k) gb[k] = 1.0 / out.boundary[(n - k) % n];
    Laurent G = Laurent::from_boundary(gb, -(n / 2 - 2), 1);
    double tail = std::max(tail_ratio(F), tail_ratio(G));
    SidePair sp{F, G, n, std::max(in.iterations, out.iterations), std::max(in.correction, out.correction), "theodorsen", tail};
    if (tail < 1e-12 || opt.boundary_n > 0) return sp;
    if (n >= 16384) {
      // unresolved spectrum: keep whichever backend leaves the smaller tail
      SidePair zp;
      try {
        zp = zipper_both(loop, opt);
      } catch (const ComputationError&) {
        return sp;
      }
      return zp.tail < sp.tail ? zp : sp;
    }
    n *= 2;
  }
}

}  // namespace

TheodorsenResult theodorsen(const std::function<cd(double)>& loop, int n, const MapOptions& opt) {
  const int nd = std::max(8 * n, 8192);
  std::vector<double> sig(nd + 1), A(nd + 1);
  for (int k = 0; k <= nd; ++k) {
    sig[k] = 2 * kPi * k / nd;
    double a = std::arg(loop(sig[k]));
    A[k] = k == 0 ? a : A[k - 1] + std::remainder(a - A[k - 1], 2 * kPi);
    if (k > 0 && !(A[k] > A[k - 1])) throw ComputationError("loop is not star-shaped about the interior point");
  }
  if (std::abs(A[nd] - A[0] - 2 * kPi) > 1e-6) throw ComputationError("loop does not wind once around the interior point");
  auto param_of = [&](double theta) {
    double th = A[0] + std::fmod(std::fmod(theta - A[0], 2 * kPi) + 2 * kPi, 2 * kPi);
    int k = int(std::upper_bound(A.begin(), A.end(), th) - A.begin()) - 1;
    k = std::clamp(k, 0, nd - 1);
    double base = A[k];
    auto fn = [&](double s) { return base + std::remainder(std::arg(loop(s)) - base, 2 * kPi) - th; };
    return root_in(fn, sig[k], sig[k + 1]);
  };
  std::vector<double> t(n), psi(n, 0.0), logr(n), sp(n);
  for (int j = 0; j < n; ++j) t[j] = 2 * kPi * j / n;
  TheodorsenResult res;
  for (int it = 1; it <= opt.max_iter; ++it) {
    for (int j = 0; j < n; ++j) {
      sp[j] = param_of(t[j] + psi[j]);
      logr[j] = std::log(std::abs(loop(sp[j])));
    }
    auto next = periodic_conjugate(logr);
    double corr = 0;
    for (int j = 0; j < n; ++j) {
      corr = std::max(corr, std::abs(next[j] - psi[j]));
      psi[j] = (1 - opt.damping) * psi[j] + opt.damping * next[j];
    }
    res.iterations = it;
    res.correction = corr;
    if (corr < opt.tol) break;
  }
  if (res.correction >= opt.tol) throw ComputationError("boundary correspondence iteration did not converge, last correction " + std::to_string(res.correction));
  res.boundary.resize(n);
  res.curve_param.resize(n);
  for (int j = 0; j < n; ++j) {
    res.curve_param[j] = param_of(t[j] + psi[j]);
    res.boundary[j] = loop(res.curve_param[j]);
  }
  return res;
}

cd ConformalPair::map(Side s, cd z) const {
  const auto& sd = side(s);
  return post(sd.S(sd.pre(z)));
}

cd ConformalPair::log_deriv(Side s, cd z) const {
  const auto& sd = side(s);
  return sd.log_const + sd.logder(sd.pre(z));
}

cd ConformalPair::disk_map(Side s, cd w) const { return post(side(s).S(w)); }

cd ConformalPair::disk_map_deriv(Side s, cd w) const {
  const auto& sd = side(s);
  return post.deriv(sd.S(w)) * sd.dS(w);
}

cd ConformalPair::boundary_point(Side, double t) const {
  return geometry == Geometry::Disk ? std::polar(1.0, t) : cd(t, 0);
}

cd ConformalPair::disk_coord(Side s, double t) const { return side(s).pre(boundary_point(s, t)); }

double ConformalPair::boundary_preimage(Side s, cd point) const {
  const auto& sd = side(s);
  cd target = post.inverse()(point);
  int nd = std::max(8 * boundary_n, 8192);
  auto dense = dense_ring(sd.S, nd);
  double phi = circle_preimage(sd.S, sd.dS, dense, target);
  cd z = sd.pre.inverse()(std::polar(1.0, phi));
  if (geometry == Geometry::Disk) {
    double a = std::arg(z);
    return a < 0 ? a + 2 * kPi : a;
  }
  return z.real();
}

namespace {

Laurent shifted_branch(Laurent s, double target_im) {
  // shift the constant term by a multiple of 2 pi i so that Im(value) lands in (-pi, pi]
  double k = std::round((target_im - wrap_pi(target_im)) / (2 * kPi));
  for (size_t j = 0; j < s.c.size(); ++j)
    if (s.lo + (int)j == 0) s.c[j] -= cd(0, 2 * kPi * k);
  return s;
}

SideMap make_side(const Laurent& S, bool exterior) {
  SideMap sd;
  sd.exterior = exterior;
  sd.S = S;
  sd.dS = S.deriv();
  return sd;
}

}  // namespace

ConformalPair disk_pair(JordanCurve curve, Laurent F, Laurent G, int n) {
  ConformalPair p;
  p.curve = std::move(curve);
  p.geometry = Geometry::Disk;
  p.boundary_n = n;
  p.f = make_side(F, false);
  p.g = make_side(G, true);
  p.f.logder = log_series(p.f.dS.ring(1.0, n), false);
  p.f.logder = shifted_branch(p.f.logder, p.f.logder.coef(0).imag());
  p.g.logder = log_series(p.g.dS.ring(1.0, n), true);
  p.g.logder = shifted_branch(p.g.logder, p.g.logder.coef(0).imag());
  p.f.dlogder = p.f.logder.deriv();
  p.g.dlogder = p.g.logder.deriv();
  return p;
}

ConformalPair halfplane_pair(JordanCurve curve, Laurent F, Laurent G, Mobius post, double af, double bf, double ag,
                             double bg, int n) {
  ConformalPair p;
  p.curve = std::move(curve);
  p.geometry = Geometry::HalfPlane;
  p.boundary_n = n;
  p.post = post;
  p.f = make_side(F, false);
  p.g = make_side(G, true);
  // divided differences Q(w) = (S(w) - S(1)) / (w - 1)
  Laurent QF;
  QF.lo = 0;
  QF.c.assign(std::max(1, F.hi()), cd(0));
  {
    cd acc = 0;
    for (int k = F.hi() - 1; k >= 0; --k) {
      acc += F.coef(k + 1);
      QF.c[k] = acc;
    }
  }
  Laurent QG;
  QG.lo = G.lo;
  QG.c.assign(1 - G.lo + 1, cd(0));
  {
    cd acc = 0;
    for (int j = -G.lo; j >= 1; --j) {
      acc += G.coef(-j);
      QG.c[-j - G.lo] = -acc;
    }
    QG.c[0 - G.lo] = G.coef(1);
  }
  auto build = [n](SideMap& sd, const Laurent& Q, bool exterior) {
    auto d = sd.dS.ring(1.0, n);
    auto q = Q.ring(1.0, n);
    for (int k = 0; k < n; ++k) d[k] /= q[k] * q[k];
    sd.logder = log_series(d, exterior);
    sd.dlogder = sd.logder.deriv();
  };
  build(p.f, QF, false);
  build(p.g, QG, true);
  cd gam = post.c;
  cd kappa = cd(0, -1) * post.det() / (2.0 * gam * gam);
  Mobius C = Mobius::cayley();
  p.f.pre = C.compose(Mobius{af, bf, 0, 1});
  p.g.pre = C.compose(Mobius{ag, bg, 0, 1});
  p.f.log_const = std::log(kappa * af);
  p.g.log_const = std::log(kappa * ag);
  // branch: arg f' and arg g' tend to the tail direction in (-pi, pi]
  for (SideMap* sd : {&p.f, &p.g}) {
    double im = (sd->log_const + sd->logder(cd(1, 0))).imag();
    sd->log_const -= cd(0, im - wrap_pi(im));
  }
  return p;
}

ConformalPair map_curve(const JordanCurve& input, Geometry geometry, const MapOptions& opt) {
  JordanCurve curve = input;
  // the interior of a loop is its bounded side; clockwise loops are traversed backwards
  if (curve.is_loop() && signed_area(curve.points) < 0) {
    auto ev = input.eval;
    curve = make_curve(CurveKind::BoundedLoop, input.tag, [ev](double t) { return ev(-t); }, loop_nodes((int)input.size()));
    curve.meta = input.meta;
    curve.meta["reversed"] = 1;
  }
  if (geometry == Geometry::Disk) {
    if (!curve.is_loop()) throw ConfigError("disk geometry needs a bounded loop");
    cd c0 = interior_point(curve.points);
    auto ev = curve.eval;
    auto sp = solve_both([ev, c0](double s) { return ev(s) - c0; }, opt);
    int n = sp.n;
    Laurent F = sp.F, G = sp.G;
    F.c[0] += c0;
    for (size_t j = 0; j < G.c.size(); ++j)
      if (G.lo + (int)j == 0) G.c[j] += c0;
    // rotate the exterior map so that g(1) = f(1)
    cd f1 = F(cd(1, 0));
    double alpha = circle_preimage(G, G.deriv(), dense_ring(G, std::max(8 * n, 8192)), f1);
    G = rotate(G, alpha);
    auto p = disk_pair(curve, F, G, n);
    p.diagnostics["iterations"] = sp.iterations;
    p.diagnostics["correction"] = sp.correction;
    p.diagnostics["boundary_n"] = n;
    p.diagnostics["zipper"] = sp.backend == "zipper";
    p.diagnostics["tail"] = sp.tail;
    return p;
  }
  if (curve.is_loop()) {
    cd p0 = curve.eval(0.0);
    curve = apply_mobius(curve, Mobius{0, 1, 1, -p0});
  }
  auto ev = curve.eval;
  cd z0 = ev(0.0);
  cd T = curve.tangent(0.0);
  std::vector<double> gaps;
  if (opt.gap > 0) gaps = {opt.gap};
  else gaps = {1.0, 2.0, 0.5, 4.0, 0.25};
  std::string last_err;
  for (double d : gaps) {
    cd a = z0 + cd(0, d) * T, b = z0 - cd(0, d) * T;
    Mobius m{1, -a, 1, -b};
    auto loop = [ev, m](double s) {
      double r = std::fmod(std::fmod(s, 2 * kPi) + 2 * kPi, 2 * kPi);
      if (r == 0.0) return cd(1, 0);
      return m(ev(std::tan((r - kPi) / 2)));
    };
    SidePair sp;
    try {
      sp = solve_both(loop, opt);
    } catch (const ComputationError& e) {
      last_err = e.what();
      continue;
    }
    int n = sp.n;
    Laurent F = sp.F, G = sp.G;
    int nd = std::max(8 * n, 8192);
    F = rotate(F, circle_preimage(F, F.deriv(), dense_ring(F, nd), cd(1, 0)));
    G = rotate(G, circle_preimage(G, G.deriv(), dense_ring(G, nd), cd(1, 0)));
    Mobius post = m.inverse();
    auto p = halfplane_pair(curve, F, G, post, 1, 0, 1, 0, n);
    double x0 = p.boundary_preimage(Side::Interior, ev(0.0)), x1 = p.boundary_preimage(Side::Interior, ev(1.0));
    double y0 = p.boundary_preimage(Side::Exterior, ev(0.0)), y1 = p.boundary_preimage(Side::Exterior, ev(1.0));
    if (!(x1 > x0) || !(y1 > y0)) throw ComputationError("orientation mismatch in half-plane normalization");
    p = halfplane_pair(curve, F, G, post, x1 - x0, x0, y1 - y0, y0, n);
    p.diagnostics["iterations"] = sp.iterations;
    p.diagnostics["correction"] = sp.correction;
    p.diagnostics["boundary_n"] = n;
    p.diagnostics["gap"] = d;
    p.diagnostics["zipper"] = sp.backend == "zipper";
    p.diagnostics["tail"] = sp.tail;
    return p;
  }
  throw ComputationError("half-plane map failed: " + last_err);
}

LogDerivField log_deriv(const ConformalPair& pair, Side side) {
  LogDerivField out;
  const ConformalPair* p = &pair;
  out.log_abs = [p, side](cd z) { return p->log_deriv(side, z).real(); };
  out.arg = [p, side](cd z) { return p->log_deriv(side, z).imag(); };
  out.energy = series_energy(pair.side(side).logder);
  return out;
}

std::vector<double> welding_nodes(Carrier c, int n, double window) {
  if (c == Carrier::Circle) return loop_nodes(n);
  return line_nodes(n, window);
}

Homeomorphism welding_homeo(const ConformalPair& pair, int n, double window) {
  Homeomorphism h;
  h.domain = pair.geometry == Geometry::Disk ? Carrier::Circle : Carrier::Line;
  if (n <= 0) n = h.domain == Carrier::Circle ? 512 : 1025;
  h.x = welding_nodes(h.domain, n, window);
  h.h.resize(n);
  h.logd.resize(n);
  for (int k = 0; k < n; ++k) {
    double t = h.x[k];
    cd z = pair.map(Side::Interior, pair.boundary_point(Side::Interior, t));
    double y = pair.boundary_preimage(Side::Exterior, z);
    if (h.domain == Carrier::Circle) {
      if (k == 0) y = wrap_pi(y);
      else y = h.h[k - 1] + std::fmod(std::fmod(y - h.h[k - 1], 2 * kPi) + 2 * kPi, 2 * kPi);
    }
    h.h[k] = y;
    h.logd[k] = pair.log_deriv(Side::Interior, pair.boundary_point(Side::Interior, t)).real() -
                pair.log_deriv(Side::Exterior, pair.boundary_point(Side::Exterior, y)).real();
    if (k > 0 && !(h.h[k] > h.h[k - 1])) throw ComputationError("welding correspondence is not monotone");
  }
  return h;
}

namespace {

struct HermiteSegment {
  double x0, dx, h0, h1, d0, d1, shift;
};

// Locates the cubic Hermite segment containing t; returns false on a linear tail.
bool hermite_segment(const Homeomorphism& m, double& t, HermiteSegment& seg) {
  const auto& x = m.x;
  const auto& h = m.h;
  const auto& logd = m.logd;
  size_t n = x.size();
  seg.shift = 0;
  if (m.domain == Carrier::Circle) {
    double k = std::floor((t - x[0]) / (2 * kPi));
    t -= 2 * kPi * k;
    seg.shift = 2 * kPi * k;
  } else if (t <= x.front() || t >= x.back()) {
    return false;
  }
  size_t k = std::upper_bound(x.begin(), x.end(), t) - x.begin();
  double x1;
  if (k >= n) {
    seg.x0 = x[n - 1]; x1 = x[0] + 2 * kPi; seg.h0 = h[n - 1]; seg.h1 = h[0] + 2 * kPi;
    seg.d0 = std::exp(logd[n - 1]); seg.d1 = std::exp(logd[0]);
  } else {
    seg.x0 = x[k - 1]; x1 = x[k]; seg.h0 = h[k - 1]; seg.h1 = h[k];
    seg.d0 = std::exp(logd[k - 1]); seg.d1 = std::exp(logd[k]);
  }
  seg.dx = x1 - seg.x0;
  return true;
}

}  // namespace

double Homeomorphism::eval(double t) const {
  HermiteSegment g;
  if (!hermite_segment(*this, t, g)) {
    if (t <= x.front()) return h.front() + std::exp(logd.front()) * (t - x.front());
    return h.back() + std::exp(logd.back()) * (t - x.back());
  }
  double s = (t - g.x0) / g.dx, s2 = s * s, s3 = s2 * s;
  double v = (2 * s3 - 3 * s2 + 1) * g.h0 + (s3 - 2 * s2 + s) * g.dx * g.d0 + (-2 * s3 + 3 * s2) * g.h1 + (s3 - s2) * g.dx * g.d1;
  return v + g.shift;
}

double Homeomorphism::deriv(double t) const {
  HermiteSegment g;
  if (!hermite_segment(*this, t, g)) return std::exp(t <= x.front() ? logd.front() : logd.back());
  double s = (t - g.x0) / g.dx, s2 = s * s;
  return ((6 * s2 - 6 * s) * (g.h0 - g.h1)) / g.dx + (3 * s2 - 4 * s + 1) * g.d0 + (3 * s2 - 2 * s) * g.d1;
}

double Homeomorphism::inverse(double y) const {
  double lo, hi;
  if (domain == Carrier::Circle) {
    double k = std::floor((y - h[0]) / (2 * kPi));
    lo = x[0] + 2 * kPi * k - 0.1;
    hi = x[0] + 2 * kPi * (k + 1) + 0.1;
  } else {
    lo = -1.0;
    hi = 1.0;
    while (eval(lo) > y) lo *= 2;
    while (eval(hi) < y) hi *= 2;
  }
  return root_in([&](double t) { return eval(t) - y; }, lo, hi);
}

double Homeomorphism::h12_logd() const {
  const int m = 2048;
  std::vector<double> s(m);
  for (int k = 0; k < m; ++k) {
    double th = 2 * kPi * k / m;
    if (domain == Carrier::Circle) {
      s[k] = std::log(std::max(1e-300, (eval(th + 1e-7) - eval(th - 1e-7)) / 2e-7));
    } else {
      double xx = k == 0 ? x.back() * 1e6 : -1.0 / std::tan(th / 2);
      if (xx <= x.front()) s[k] = logd.front();
      else if (xx >= x.back()) s[k] = logd.back();
      else {
        size_t j = std::upper_bound(x.begin(), x.end(), xx) - x.begin();
        double w = (xx - x[j - 1]) / (x[j] - x[j - 1]);
        s[k] = logd[j - 1] * (1 - w) + logd[j] * w;
      }
    }
  }
  return h12_spectral(s);
}

double Homeomorphism::max_qs_ratio() const {
  double worst = 1;
  for (double xc : {-2.0, -0.5, 0.0, 0.7, 1.5}) {
    for (double t : {0.05, 0.3, 1.0}) {
      double r = (eval(xc + t) - eval(xc)) / (eval(xc) - eval(xc - t));
      worst = std::max({worst, r, 1 / r});
    }
  }
  return worst;
}

}  // namespace weldlab
