#include "weldlab/welding.hpp"

#include <Eigen/Dense>
#include <boost/math/interpolators/makima.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

#include "weldlab/parallel.hpp"

namespace weldlab {

namespace {

template <class F>
double gauss8(F&& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 8>::integrate(f, a, b);
}

template <class F>
double root_bracketed(F&& f, double lo, double hi) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (flo * fhi > 0) throw ComputationError("root is not bracketed");
  std::uintmax_t it = 200;
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(50), it);
  return 0.5 * (r.first + r.second);
}

bool equispaced_loop(const std::vector<double>& x) {
  int n = (int)x.size();
  for (int k = 0; k < n; ++k)
    if (std::abs(x[k] - 2 * kPi * k / n) > 1e-9) return false;
  return true;
}

}  // namespace

double BoundaryDensity::log_at(double x) const {
  if (carrier == Carrier::Line) {
    if (x <= nodes.front()) return log_density.front();
    if (x >= nodes.back()) return log_density.back();
  }
  return eval_(x);
}

double BoundaryDensity::cumulative(double x) const {
  if (carrier == Carrier::Circle) {
    double turns = std::floor(x / (2 * kPi));
    double r = x - 2 * kPi * turns;
    int n = (int)fourier_.size();
    double c0 = fourier_[0].real();
    double acc = c0 * r;
    cd e = std::polar(1.0, r), ek = e;
    for (int k = 1; k < (n + 1) / 2; ++k) {
      // conjugate pairs k and -k combine into a real term
      acc += 2 * (fourier_[k] * (ek - 1.0) / cd(0, k)).real();
      ek *= e;
    }
    return 2 * kPi * turns + acc / c0;
  }
  if (x <= nodes.front()) return mass.front() + std::exp(log_density.front()) * (x - nodes.front());
  if (x >= nodes.back()) return mass.back() + std::exp(log_density.back()) * (x - nodes.back());
  size_t k = std::upper_bound(nodes.begin(), nodes.end(), x) - nodes.begin();
  return mass[k - 1] + gauss8([this](double s) { return std::exp(eval_(s)); }, nodes[k - 1], x);
}

double BoundaryDensity::inverse(double m) const {
  auto f = [&](double x) { return cumulative(x) - m; };
  if (carrier == Carrier::Circle) {
    double turns = std::floor(m / (2 * kPi));
    double r = m - 2 * kPi * turns;
    size_t k = std::upper_bound(mass.begin(), mass.end(), r) - mass.begin();
    double lo = k == 0 ? 0.0 : nodes[k - 1];
    double hi = k >= nodes.size() ? 2 * kPi : nodes[k];
    return 2 * kPi * turns + root_bracketed([&](double x) { return cumulative(x) - r; }, lo, hi);
  }
  if (m <= mass.front()) return nodes.front() + (m - mass.front()) / std::exp(log_density.front());
  if (m >= mass.back()) return nodes.back() + (m - mass.back()) / std::exp(log_density.back());
  size_t k = std::upper_bound(mass.begin(), mass.end(), m) - mass.begin();
  return root_bracketed(f, nodes[k - 1], nodes[k]);
}

BoundaryDensity BoundaryDensity::build(const BoundaryFunction& u, Carrier carrier) {
  BoundaryDensity d;
  d.carrier = carrier;
  if (carrier == Carrier::Curve) throw ConfigError("densities live on R or on the circle");
  if (carrier == Carrier::Circle) {
    std::vector<double> samples;
    if (u.eval) {
      const int n = 1024;
      d.nodes = loop_nodes(n);
      for (double t : d.nodes) samples.push_back(u.eval(t));
      d.eval_ = u.eval;
    } else {
      if (!equispaced_loop(u.nodes)) throw ConfigError("circle densities need equispaced samples");
      d.nodes = u.nodes;
      samples = u.values;
      auto coef = fourier(samples);
      d.eval_ = [coef](double t) { return trig_eval(coef, t); };
    }
    d.log_density = samples;
    std::vector<double> ex(samples.size());
    for (size_t k = 0; k < ex.size(); ++k) {
      if (!std::isfinite(samples[k])) throw ConfigError("non-finite log density");
      ex[k] = std::exp(samples[k]);
    }
    d.fourier_ = fourier(ex);
    double c0 = d.fourier_[0].real();
    if (!(c0 > 0)) throw ConfigError("degenerate density");
    d.log_total = std::log(2 * kPi * c0);
    d.mass.resize(d.nodes.size());
    for (size_t k = 0; k < d.nodes.size(); ++k) d.mass[k] = d.cumulative(d.nodes[k]);
  } else {
    d.nodes = u.nodes;
    if (d.nodes.size() < 4) throw ConfigError("density needs at least four samples");
    if (u.eval) {
      d.eval_ = u.eval;
      for (double x : d.nodes) d.log_density.push_back(u.eval(x));
    } else {
      d.log_density = u.values;
      auto spline = std::make_shared<boost::math::interpolators::makima<std::vector<double>>>(
          std::vector<double>(u.nodes), std::vector<double>(u.values));
      d.eval_ = [spline](double x) { return (*spline)(x); };
    }
    for (double v : d.log_density)
      if (!std::isfinite(v)) throw ConfigError("non-finite log density");
    d.mass.assign(d.nodes.size(), 0.0);
    auto ex = [&d](double s) { return std::exp(d.eval_(s)); };
    for (size_t k = 1; k < d.nodes.size(); ++k) d.mass[k] = d.mass[k - 1] + gauss8(ex, d.nodes[k - 1], d.nodes[k]);
    double origin = 0;
    if (0.0 <= d.nodes.front()) origin = d.mass.front() - std::exp(d.log_density.front()) * d.nodes.front();
    else if (0.0 >= d.nodes.back()) origin = d.mass.back() - std::exp(d.log_density.back()) * d.nodes.back();
    else origin = d.cumulative(0.0);
    for (double& m : d.mass) m -= origin;
  }
  for (size_t k = 1; k < d.mass.size(); ++k)
    if (!(d.mass[k] > d.mass[k - 1])) throw ConfigError("cumulative mass is not strictly increasing");
  return d;
}

BoundaryFunction boundary_values(const SideField& u, const std::vector<double>& nodes) {
  if (!u.pair) throw ConfigError("boundary values need a side field attached to a pair");
  BoundaryFunction bf;
  bf.carrier = u.pair->geometry == Geometry::Disk ? Carrier::Circle : Carrier::Line;
  bf.nodes = nodes;
  SideField copy = u;
  bf.eval = [copy](double t) { return copy.value(copy.pair->disk_coord(copy.side, t)); };
  for (double t : nodes) bf.values.push_back(bf.eval(t));
  bf.valid.assign(nodes.size(), true);
  return bf;
}

BoundaryFunction boundary_log_derivative(const ConformalPair& pair, Side side, const std::vector<double>& nodes) {
  BoundaryFunction bf;
  bf.carrier = pair.geometry == Geometry::Disk ? Carrier::Circle : Carrier::Line;
  bf.nodes = nodes;
  const ConformalPair* p = &pair;
  bf.eval = [p, side](double t) { return p->log_deriv(side, p->boundary_point(side, t)).real(); };
  for (double t : nodes) bf.values.push_back(bf.eval(t));
  bf.valid.assign(nodes.size(), true);
  return bf;
}

CutResult cut(const ScalarField& phi, const ConformalPair& pair, const QuadOptions& q) {
  CutResult r;
  r.u = SideField::on(pair, Side::Interior);
  r.u.phi = phi;
  r.u.a_log = 1;
  r.u.offset = pair.f.log_const.real();
  r.v = SideField::on(pair, Side::Exterior);
  r.v.phi = phi;
  r.v.a_log = 1;
  r.v.offset = pair.g.log_const.real();
  bool disk = pair.geometry == Geometry::Disk;
  r.plane_energy = dirichlet_energy_plane(phi, q);
  r.loewner_energy = disk ? loop_energy(pair).value : line_energy(pair).value;
  r.energy_u = disk ? curvature_action(r.u, q) : dirichlet_energy(r.u, q).value;
  r.energy_v = disk ? curvature_action(r.v, q) : dirichlet_energy(r.v, q).value;
  auto& rep = r.report;
  rep.label = "cutting";
  rep.lhs = r.plane_energy + r.loewner_energy;
  rep.rhs = {{disk ? "interior_action" : "interior_energy", r.energy_u},
             {disk ? "exterior_action" : "exterior_energy", r.energy_v}};
  rep.metadata["plane_energy"] = r.plane_energy;
  rep.metadata["loewner_energy"] = r.loewner_energy;
  rep.metadata["boundary_n"] = pair.boundary_n;
  rep.notes["geometry"] = disk ? "disk" : "half-plane";
  rep.finalize();
  return r;
}

Homeomorphism isometric_homeo(const BoundaryFunction& u, const BoundaryFunction& v, Carrier carrier) {
  auto U = BoundaryDensity::build(u, carrier);
  auto V = BoundaryDensity::build(v, carrier);
  if (carrier == Carrier::Line && v.eval) {
    // widen the target table until the linear mass tails are not needed
    BoundaryFunction wide = v;
    double w = std::max(std::abs(v.nodes.front()), std::abs(v.nodes.back()));
    for (int it = 0; it < 20 && (V.mass.front() > U.mass.front() || V.mass.back() < U.mass.back()); ++it) {
      w *= 1.5;
      wide.nodes = line_nodes((int)v.nodes.size(), w);
      V = BoundaryDensity::build(wide, carrier);
    }
  }
  Homeomorphism h;
  h.domain = carrier;
  h.x = u.nodes;
  size_t n = h.x.size();
  h.h.resize(n);
  h.logd.resize(n);
  double shift = carrier == Carrier::Circle ? V.log_total - U.log_total : 0.0;
  parallel_for((int)n, [&](int k) {
    double y = V.inverse(U.cumulative(h.x[k]));
    h.h[k] = y;
    h.logd[k] = U.log_at(h.x[k]) - V.log_at(y) + shift;
  });
  for (size_t k = 1; k < n; ++k)
    if (!(h.h[k] > h.h[k - 1])) throw ComputationError("isometric homeomorphism is not monotone");
  return h;
}

namespace {

struct CircleWeld {
  Laurent F, G;
  double residual = 0;
};

// Least squares for sum a_n e^{int} - sum_k b_{-k} e^{-ik H(t)} = e^{iH(t)} at the nodes,
// i.e. F(e^{it}) = G(e^{iH(t)}) with G(w) = w + O(1/w).
CircleWeld solve_circle(const std::vector<double>& t, const std::vector<double>& H, int M) {
  int N = (int)t.size();
  if (N < 2 * M + 1) throw ConfigError("too few collocation points for the requested terms");
  Eigen::MatrixXcd A(N, 2 * M + 1);
  Eigen::VectorXcd b(N);
  for (int j = 0; j < N; ++j) {
    cd e = std::polar(1.0, t[j]), ek(1, 0);
    for (int n = 0; n <= M; ++n) {
      A(j, n) = ek;
      ek *= e;
    }
    cd g = std::polar(1.0, -H[j]), gk = g;
    for (int k = 1; k <= M; ++k) {
      A(j, M + k) = -gk;
      gk *= g;
    }
    b(j) = std::polar(1.0, H[j]);
  }
  Eigen::VectorXcd sol = A.colPivHouseholderQr().solve(b);
  CircleWeld out;
  out.residual = (A * sol - b).cwiseAbs().maxCoeff();
  out.F.lo = 0;
  out.F.c.assign(sol.data(), sol.data() + M + 1);
  out.G.lo = -M;
  out.G.c.assign(M + 2, cd(0));
  for (int k = 1; k <= M; ++k) out.G.c[-k + M] = sol(M + k);
  out.G.c[M + 1] = 1.0;
  return out;
}

Laurent affine_image(const Laurent& s, cd shift, cd scale) {
  Laurent r = s;
  for (size_t j = 0; j < r.c.size(); ++j) {
    if (r.lo + (int)j == 0) r.c[j] -= shift;
    r.c[j] /= scale;
  }
  return r;
}

int pow2_at_least(int n) {
  int p = 1;
  while (p < n) p *= 2;
  return p;
}

}  // namespace

WeldResult weld_solve(const Homeomorphism& h, const WeldOptions& opt) {
  int N = opt.collocation;
  int M = opt.terms > 0 ? opt.terms : N / 4;
  for (size_t k = 1; k < h.h.size(); ++k)
    if (!(h.h[k] > h.h[k - 1])) throw ConfigError("welding homeomorphism is not monotone");
  std::vector<double> t(N), H(N);
  bool circle = h.domain == Carrier::Circle;
  for (int j = 0; j < N; ++j) {
    t[j] = 2 * kPi * j / N;
    if (circle) {
      H[j] = h.eval(t[j]) - h.eval(0.0);
    } else if (j == 0) {
      H[j] = 0;
    } else {
      // the half-plane problem seen through the Cayley map, R -> circle by x -> pi + 2 atan x
      double x = std::tan((t[j] - kPi) / 2);
      H[j] = kPi + 2 * std::atan(h.eval(x));
    }
  }
  auto cw = solve_circle(t, H, M);
  WeldResult out;
  out.terms = M;
  out.residual = cw.residual;
  int n = pow2_at_least(std::max(1024, 4 * (M + 1)));
  if (circle) {
    cd f0 = cw.F(cd(0)), f1 = cw.F(cd(1, 0));
    Laurent F = affine_image(cw.F, f0, f1 - f0), G = affine_image(cw.G, f0, f1 - f0);
    out.curve = make_curve(CurveKind::BoundedLoop, "welded", [F](double s) { return F(std::polar(1.0, s)); }, loop_nodes(1024));
    out.pair = disk_pair(out.curve, F, G, n);
  } else {
    Laurent F = cw.F, G = cw.G;
    cd p = F(cd(1, 0));
    G.c[0 - G.lo] += p - G(cd(1, 0));
    cd z0 = F(cd(-1, 0)), z1 = F(cd(0, -1));
    cd k = (z1 - p) / (z1 - z0);
    Mobius post{k, -k * z0, 1, -p};
    Mobius C = Mobius::cayley();
    auto ev = [F, post, C](double x) { return post(F(C(cd(x, 0)))); };
    double w = kEscapeRadius;
    while (w < 1e6 && (std::abs(ev(w)) < kEscapeRadius || std::abs(ev(-w)) < kEscapeRadius)) w *= 2;
    out.curve = make_curve(CurveKind::ThroughInfinity, "welded", ev, line_nodes(1025, w));
    out.pair = halfplane_pair(out.curve, F, G, post, 1, 0, 1, 0, n);
  }
  out.pair.diagnostics["collocation_residual"] = out.residual;
  out.pair.diagnostics["terms"] = M;
  return out;
}

double normalized_distance(const ConformalPair& a, const ConformalPair& b, double radius) {
  if (a.geometry != b.geometry) throw ConfigError("pairs of different geometry");
  bool disk = a.geometry == Geometry::Disk;
  auto normal = [](const ConformalPair& p) {
    cd z0 = p.map(Side::Interior, cd(0));
    cd z1 = p.map(Side::Interior, cd(1, 0));
    return std::make_pair(z0, z1 - z0);
  };
  auto [a0, as] = normal(a);
  auto [b0, bs] = normal(b);
  double worst = 0;
  if (disk) {
    for (int k = 0; k < 2048; ++k) {
      cd w = std::polar(1.0, 2 * kPi * k / 2048);
      cd za = (a.map(Side::Interior, w) - a0) / as, zb = (b.map(Side::Interior, w) - b0) / bs;
      worst = std::max(worst, std::abs(za - zb));
    }
  } else {
    for (double x : line_nodes(2049, kEscapeRadius)) {
      cd za = (a.map(Side::Interior, cd(x, 0)) - a0) / as, zb = (b.map(Side::Interior, cd(x, 0)) - b0) / bs;
      if (std::abs(za) > radius && std::abs(zb) > radius) continue;
      worst = std::max(worst, std::abs(za - zb));
    }
  }
  return worst;
}

ScalarField transport(const SideField& u, const ConformalPair& target, Side side) {
  if (!u.pair) throw ConfigError("transport needs a side field attached to a pair");
  if (u.pair->geometry != target.geometry) throw ConfigError("transport between different geometries");
  Mobius R = u.pair->side(side).pre.compose(target.side(side).pre.inverse());
  ScalarField s;
  s.kind = "transported";
  SideField copy = u;
  copy.side = side;
  s.value = [copy, R](cd w) { return copy.value(R(w)); };
  s.grad = [copy, R](cd w) { return copy.grad(R(w)) * std::conj(R.deriv(w)); };
  return s;
}

std::optional<cd> inverse_map(const ConformalPair& pair, Side side, cd z) {
  const auto& sd = pair.side(side);
  cd target = pair.post.inverse()(z);
  if (!std::isfinite(std::abs(target))) return std::nullopt;
  // closest node of a polar grid, then Newton
  const int nr = 48, na = 256;
  cd best = 0;
  double dist = INFINITY;
  for (int i = 0; i < nr; ++i) {
    double r = 1 - std::pow(0.85, i + 1);
    if (sd.exterior) r = 1 / r;
    auto ring = sd.S.ring(r, na);
    for (int k = 0; k < na; ++k) {
      double d = std::abs(ring[k] - target);
      if (d < dist) {
        dist = d;
        best = std::polar(r, 2 * kPi * k / na);
      }
    }
  }
  cd w = best;
  double tol = 1e-12 * (1 + std::abs(target));
  for (int it = 0; it < 60; ++it) {
    cd res = sd.S(w) - target;
    if (std::abs(res) < tol) break;
    cd step = res / sd.dS(w);
    w -= step;
    if (!std::isfinite(std::abs(w))) return std::nullopt;
  }
  if (std::abs(sd.S(w) - target) > 1e-9 * (1 + std::abs(target))) return std::nullopt;
  double r = std::abs(w);
  if (sd.exterior ? r < 1 - 1e-12 : r > 1 + 1e-12) return std::nullopt;
  return sd.pre.inverse()(w);
}

double AmbientResult::value(const ConformalPair& pair, cd z) const {
  if (auto zr = inverse_map(pair, Side::Interior, z)) return inside.value(pair.f.pre(*zr));
  if (auto zr = inverse_map(pair, Side::Exterior, z)) return outside.value(pair.g.pre(*zr));
  throw ComputationError("point could not be located on either side of the curve");
}

AmbientResult ambient_field(const SideField& u, const SideField& v, const ConformalPair& pair, const QuadOptions& q) {
  if (!u.pair || !v.pair) throw ConfigError("ambient field needs side fields attached to pairs");
  bool disk = pair.geometry == Geometry::Disk;
  AmbientResult r;
  r.inside = SideField::on(pair, Side::Interior);
  r.inside.local = transport(u, pair, Side::Interior);
  r.inside.a_log = -1;
  r.inside.offset = -pair.f.log_const.real();
  r.outside = SideField::on(pair, Side::Exterior);
  r.outside.local = transport(v, pair, Side::Exterior);
  r.outside.a_log = -1;
  r.outside.offset = -pair.g.log_const.real();

  auto nodes = disk ? loop_nodes(256) : line_nodes(257, 20.0);
  auto& mm = r.mismatch;
  mm.carrier = disk ? Carrier::Circle : Carrier::Line;
  mm.nodes = nodes;
  mm.values.assign(nodes.size(), 0.0);
  parallel_for((int)nodes.size(), [&](int k) {
    double t = nodes[k];
    cd z = pair.map(Side::Interior, pair.boundary_point(Side::Interior, t));
    double y = pair.boundary_preimage(Side::Exterior, z);
    mm.values[k] = r.inside.value(pair.disk_coord(Side::Interior, t)) - r.outside.value(pair.disk_coord(Side::Exterior, y));
  });
  mm.valid.assign(nodes.size(), true);
  for (double m : mm.values) r.max_mismatch = std::max(r.max_mismatch, std::abs(m));
  r.glued = r.max_mismatch <= kTraceMismatchTol;
  r.energy_inside = dirichlet_energy(r.inside, q).value;
  r.energy_outside = dirichlet_energy(r.outside, q).value;

  auto& rep = r.report;
  rep.label = "ambient_field";
  rep.metadata["max_trace_mismatch"] = r.max_mismatch;
  rep.metadata["trace_tolerance"] = kTraceMismatchTol;
  if (!r.glued) {
    r.energy = NAN;
    rep.notes["status"] = "trace mismatch: (u, v) are inconsistent with the welding of this curve";
    rep.lhs = NAN;
    rep.residual = NAN;
    rep.relative = NAN;
    return r;
  }
  r.energy = r.energy_inside + r.energy_outside;
  rep.notes["status"] = "glued";
  double su = disk ? curvature_action(u, q) : dirichlet_energy(u, q).value;
  double sv = disk ? curvature_action(v, q) : dirichlet_energy(v, q).value;
  rep.lhs = su + sv;
  rep.rhs = {{"loewner_energy", disk ? loop_energy(pair).value : line_energy(pair).value}, {"ambient_energy", r.energy}};
  rep.finalize();

  // pushforward of e^u dx against e^phi |dz| along the curve
  std::vector<std::pair<double, double>> intervals;
  if (disk) {
    for (int l = 1; l <= 4; ++l)
      for (int k = 0; k < (1 << l); ++k) intervals.push_back({2 * kPi * k / (1 << l), 2 * kPi * (k + 1) / (1 << l)});
  } else {
    for (int l = 0; l <= 2; ++l) {
      double w = 1.0 / (1 << l);
      for (double a = -2; a < 2 - 1e-12; a += w) intervals.push_back({a, a + w});
    }
  }
  r.pushforward.resize(intervals.size());
  const JordanCurve& curve = pair.curve;
  double period = 2 * kPi;
  parallel_for((int)intervals.size(), [&](int i) {
    auto [a, b] = intervals[i];
    PushforwardCheck c;
    c.lo = a;
    c.hi = b;
    auto ref = [&](double x) { return std::exp(u.value(u.pair->disk_coord(Side::Interior, x))); };
    for (int p = 0; p < 4; ++p) c.reference_mass += gauss8(ref, a + (b - a) * p / 4, a + (b - a) * (p + 1) / 4);
    cd za = pair.map(Side::Interior, pair.boundary_point(Side::Interior, a));
    cd zb = pair.map(Side::Interior, pair.boundary_point(Side::Interior, b));
    double sa = param_of_point(curve, za), sb = param_of_point(curve, zb);
    if (curve.is_loop() && sb <= sa) sb += period;
    auto along = [&](double s) {
      cd z = curve.eval(s);
      double hs = 1e-6 * std::max(1.0, std::abs(s));
      double speed = std::abs(curve.eval(s + hs) - curve.eval(s - hs)) / (2 * hs);
      double x = pair.boundary_preimage(Side::Interior, z);
      return std::exp(r.inside.value(pair.disk_coord(Side::Interior, x))) * speed;
    };
    for (int p = 0; p < 4; ++p) c.curve_mass += gauss8(along, sa + (sb - sa) * p / 4, sa + (sb - sa) * (p + 1) / 4);
    c.relative = std::abs(c.curve_mass - c.reference_mass) / c.reference_mass;
    r.pushforward[i] = c;
  });
  for (auto& c : r.pushforward) r.pushforward_max = std::max(r.pushforward_max, c.relative);
  rep.metadata["pushforward_max_relative"] = r.pushforward_max;
  return r;
}

namespace {

double loop_length(const ConformalPair& p) {
  int n = std::max(p.boundary_n, 1024);
  auto d = p.f.dS.ring(1.0, n);
  double s = 0;
  for (auto& x : d) s += std::abs(x);
  return 2 * kPi * s / n;
}

double pair_energy(const ConformalPair& p) {
  return p.geometry == Geometry::Disk ? loop_energy(p).value : line_energy(p).value;
}

}  // namespace

ArclengthWeld arclength_weld(const JordanCurve& c1, const JordanCurve& c2, const ArclengthMarks& marks,
                             const WeldOptions& opt) {
  if (c1.is_loop() != c2.is_loop()) throw ConfigError("arclength welding needs two loops or two curves through infinity");
  bool loops = c1.is_loop();
  Geometry geo = loops ? Geometry::Disk : Geometry::HalfPlane;
  ConformalPair P1 = map_curve(c1, geo), P2 = map_curve(c2, geo);
  ArclengthWeld out;
  double shift = 0;
  if (loops) {
    double L1 = loop_length(P1), L2 = loop_length(P2);
    if (std::abs(L1 - L2) > 1e-6 * std::max(L1, L2)) throw ConfigError("loops have different lengths");
    out.length_scale = L1 / L2;
    shift = std::log(out.length_scale);
  }
  auto nodes = loops ? loop_nodes(512) : line_nodes(1025, 40.0);
  Carrier carrier = loops ? Carrier::Circle : Carrier::Line;
  // reference parameters of the marked points on each side of each curve
  auto mark = [](const ConformalPair& p, Side s, const std::optional<cd>& m) {
    return m ? p.boundary_preimage(s, *m) : 0.0;
  };
  auto weld = [&](const ConformalPair& inner, const std::optional<cd>& m_in, double s_in, const ConformalPair& outer,
                  const std::optional<cd>& m_out, double s_out) {
    double t_in = mark(inner, Side::Interior, m_in), t_out = mark(outer, Side::Exterior, m_out);
    auto fu = boundary_log_derivative(inner, Side::Interior, nodes).eval;
    auto fv = boundary_log_derivative(outer, Side::Exterior, nodes).eval;
    BoundaryFunction u, v;
    u.carrier = v.carrier = carrier;
    u.nodes = v.nodes = nodes;
    u.eval = [fu, s_in, t_in](double t) { return fu(t + t_in) + s_in; };
    v.eval = [fv, s_out, t_out](double t) { return fv(t + t_out) + s_out; };
    for (double t : nodes) {
      u.values.push_back(u.eval(t));
      v.values.push_back(v.eval(t));
    }
    return weld_solve(isometric_homeo(u, v, carrier), opt);
  };
  out.first = weld(P1, marks.first, 0.0, P2, marks.second, shift);
  out.second = weld(P2, marks.second, shift, P1, marks.first, 0.0);
  out.energy_1 = pair_energy(P1);
  out.energy_2 = pair_energy(P2);
  out.energy_first = pair_energy(out.first.pair);
  out.energy_second = pair_energy(out.second.pair);
  auto& rep = out.report;
  rep.label = "arclength_welding";
  rep.lhs = out.energy_1 + out.energy_2;
  rep.rhs = {{"welded_first", out.energy_first}, {"welded_second", out.energy_second}};
  rep.finalize();
  rep.metadata["length_scale"] = out.length_scale;
  rep.metadata["first_margin"] = rep.lhs - out.energy_first;
  rep.metadata["second_margin"] = rep.lhs - out.energy_second;
  rep.notes["inequality"] = "lhs >= rhs";
  return out;
}

namespace {

// outward normal derivative at a reference boundary parameter
double normal_derivative(const SideField& u, double t) {
  const ConformalPair& p = *u.pair;
  bool interior = u.side == Side::Interior;
  cd z = p.boundary_point(u.side, t);
  cd dir = p.geometry == Geometry::Disk ? (interior ? z : -z) : (interior ? cd(0, -1) : cd(0, 1));
  const auto& pre = p.side(u.side).pre;
  cd w = pre(z);
  cd dw = pre.deriv(z) * dir;
  return (std::conj(u.grad(w)) * dw).real();
}

}  // namespace

BoundaryFunction curvature_residual(const SideField& u, const SideField& v, const Homeomorphism& h) {
  if (!u.pair || !v.pair) throw ConfigError("curvature residual needs side fields attached to pairs");
  if (h.x.empty()) throw ConfigError("homeomorphism derivative unavailable");
  bool circle = h.domain == Carrier::Circle;
  BoundaryFunction out;
  out.carrier = h.domain;
  out.nodes = h.x;
  out.values.resize(h.x.size());
  out.valid.assign(h.x.size(), true);
  parallel_for((int)h.x.size(), [&](int k) {
    double x = h.x[k];
    double du = normal_derivative(u, x);
    double dv = normal_derivative(v, h.eval(x));
    double d = h.deriv(x);
    out.values[k] = circle ? du + 1 + (dv - 1) * d : du + dv * d;
  });
  return out;
}

}  // namespace weldlab
