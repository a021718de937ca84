#include "weldlab/dirichlet.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace weldlab {

namespace {

struct Rule {
  std::vector<double> x, w;  // on [-1, 1]
};

template <int N>
Rule make_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  Rule r;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) {
      r.x.push_back(0);
      r.w.push_back(w[i]);
    } else {
      r.x.push_back(-a[i]);
      r.w.push_back(w[i]);
      r.x.push_back(a[i]);
      r.w.push_back(w[i]);
    }
  }
  return r;
}

const Rule& gl_rule(int order) {
  static const Rule r4 = make_rule<4>(), r8 = make_rule<8>(), r12 = make_rule<12>(), r16 = make_rule<16>(), r20 = make_rule<20>();
  if (order <= 4) return r4;
  if (order <= 8) return r8;
  if (order <= 12) return r12;
  if (order <= 16) return r16;
  return r20;
}

// Radial panels on [0, 1 - delta], halving toward the cut-off.
std::vector<double> radial_breaks(double delta) {
  std::vector<double> b{0.0};
  double gap = 0.5;
  while (gap > 2 * delta) {
    b.push_back(1 - gap);
    gap /= 2;
  }
  b.push_back(1 - delta);
  return b;
}

double richardson(const std::vector<double>& e) {
  // cut-offs halve at each step; error expands in powers of delta
  std::vector<double> t = e;
  for (size_t j = 1; j < t.size(); ++j)
    for (size_t k = t.size() - 1; k >= j; --k) {
      double f = std::pow(2.0, (double)j);
      t[k] = (f * t[k] - t[k - 1]) / (f - 1);
      if (k == j) break;
    }
  return t.back();
}

bool finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

EnergyResult disk_energy(const RingIntegrand& integrand, const QuadOptions& q) {
  const Rule& rule = gl_rule(q.gl_order);
  EnergyResult res;
  for (double delta : q.deltas) {
    auto br = radial_breaks(delta);
    std::vector<double> rs, ws;
    for (size_t p = 0; p + 1 < br.size(); ++p) {
      double a = br[p], b = br[p + 1];
      for (size_t i = 0; i < rule.x.size(); ++i) {
        rs.push_back(0.5 * (a + b) + 0.5 * (b - a) * rule.x[i]);
        ws.push_back(0.5 * (b - a) * rule.w[i]);
      }
    }
    std::vector<double> ring_sum(rs.size());
    parallel_for((int)rs.size(), [&](int i) {
      std::vector<double> vals;
      integrand(rs[i], q.n_theta, vals);
      double s = 0;
      for (double v : vals) s += v;
      ring_sum[i] = s * (2 * kPi / q.n_theta);
    });
    double total = 0;
    for (size_t i = 0; i < rs.size(); ++i) total += ws[i] * rs[i] * ring_sum[i];
    res.at_delta.push_back(total / kPi);
  }
  res.value = richardson(res.at_delta);
  return res;
}

double box_energy(const std::function<cd(cd)>& grad, cd lo, cd hi, double panel, int order) {
  const Rule& rule = gl_rule(order);
  int nx = std::max(1, (int)std::ceil((hi.real() - lo.real()) / panel));
  int ny = std::max(1, (int)std::ceil((hi.imag() - lo.imag()) / panel));
  double hx = (hi.real() - lo.real()) / nx, hy = (hi.imag() - lo.imag()) / ny;
  std::vector<double> col(nx);
  parallel_for(nx, [&](int i) {
    double s = 0;
    for (int j = 0; j < ny; ++j)
      for (size_t a = 0; a < rule.x.size(); ++a)
        for (size_t b = 0; b < rule.x.size(); ++b) {
          double x = lo.real() + hx * (i + 0.5 + 0.5 * rule.x[a]);
          double y = lo.imag() + hy * (j + 0.5 + 0.5 * rule.x[b]);
          s += rule.w[a] * rule.w[b] * std::norm(grad(cd(x, y)));
        }
    col[i] = s * 0.25 * hx * hy;
  });
  double total = 0;
  for (double c : col) total += c;
  return total / kPi;
}

double SideField::value(cd w) const {
  double v = offset;
  if (phi) {
    cd z = pair ? pair->disk_map(side, w) : w;
    v += finite(z) ? phi->value(z) : phi->c_inf.value_or(0.0);
  }
  if (local) v += local->value(w);
  if (a_log != 0) v += a_log * pair->side(side).logder(w).real();
  if (a_h != 0) v += a_h * H(w).real();
  return v;
}

cd SideField::grad(cd w) const {
  cd g = 0;
  if (phi) {
    if (pair) {
      cd z = pair->disk_map(side, w);
      if (finite(z)) g += phi->grad(z) * std::conj(pair->disk_map_deriv(side, w));
    } else {
      g += phi->grad(w);
    }
  }
  if (local) g += local->grad(w);
  if (a_log != 0) g += a_log * std::conj(pair->side(side).dlogder(w));
  if (a_h != 0) g += a_h * std::conj(H.deriv()(w));
  return g;
}

std::vector<double> SideField::boundary(int n) const {
  std::vector<double> out(n);
  std::vector<cd> zs, lg, hv;
  if (pair) {
    const auto& sd = pair->side(side);
    auto S = sd.S.ring(1.0, n);
    zs.resize(n);
    for (int k = 0; k < n; ++k) zs[k] = pair->post(S[k]);
    if (a_log != 0) lg = sd.logder.ring(1.0, n);
  }
  if (a_h != 0) hv = H.ring(1.0, n);
  for (int k = 0; k < n; ++k) {
    cd w = std::polar(1.0, 2 * kPi * k / n);
    double v = offset;
    if (phi) {
      cd z = pair ? zs[k] : w;
      v += finite(z) ? phi->value(z) : phi->c_inf.value_or(0.0);
    }
    if (local) v += local->value(w);
    if (a_log != 0) v += a_log * lg[k].real();
    if (a_h != 0) v += a_h * hv[k].real();
    out[k] = v;
  }
  return out;
}

EnergyResult dirichlet_energy(const SideField& u, const QuadOptions& q) {
  bool ext = u.is_exterior();
  const SideMap* sd = u.pair ? &u.pair->side(u.side) : nullptr;
  Laurent dH = u.a_h != 0 ? u.H.deriv() : Laurent{};
  auto integrand = [&](double rho, int n, std::vector<double>& out) {
    double r = ext ? 1.0 / rho : rho;
    std::vector<cd> g(n, cd(0));
    if (u.phi) {
      if (sd) {
        auto S = sd->S.ring(r, n), dS = sd->dS.ring(r, n);
        for (int k = 0; k < n; ++k) {
          cd z = u.pair->post(S[k]);
          if (!finite(z)) continue;
          g[k] += u.phi->grad(z) * std::conj(u.pair->post.deriv(S[k]) * dS[k]);
        }
      } else {
        for (int k = 0; k < n; ++k) g[k] += u.phi->grad(std::polar(r, 2 * kPi * k / n));
      }
    }
    if (u.local)
      for (int k = 0; k < n; ++k) g[k] += u.local->grad(std::polar(r, 2 * kPi * k / n));
    if (u.a_log != 0) {
      auto d = sd->dlogder.ring(r, n);
      for (int k = 0; k < n; ++k) g[k] += u.a_log * std::conj(d[k]);
    }
    if (u.a_h != 0) {
      auto d = dH.ring(r, n);
      for (int k = 0; k < n; ++k) g[k] += u.a_h * std::conj(d[k]);
    }
    out.resize(n);
    double jac = ext ? std::pow(r, 4) : 1.0;
    for (int k = 0; k < n; ++k) {
      double v = std::norm(g[k]) * jac;
      out[k] = std::isfinite(v) ? v : 0.0;
    }
  };
  return disk_energy(integrand, q);
}

double dirichlet_energy_plane(const ScalarField& phi, const QuadOptions& q) {
  if (!phi.c_inf) throw ConfigError("plane energy needs a field that is constant near infinity");
  if (!phi.has_box()) return 0.0;
  return box_energy(phi.grad, phi.box_lo, phi.box_hi, phi.feature / 2, q.plane_order);
}

double dirichlet_energy_plane(const ScalarField& phi, const ConformalPair& pair, const QuadOptions& q) {
  SideField a = SideField::on(pair, Side::Interior), b = SideField::on(pair, Side::Exterior);
  a.phi = phi;
  b.phi = phi;
  return dirichlet_energy(a, q).value + dirichlet_energy(b, q).value;
}

double h12_seminorm_spectral(const std::vector<double>& samples) { return h12_spectral(samples); }

double h12_seminorm(const std::vector<cd>& pts, const std::vector<double>& u, bool closed) {
  size_t n = pts.size();
  if (n != u.size() || n < 3) throw ConfigError("h12 seminorm needs matching samples");
  std::vector<double> w(n), du(n);
  for (size_t i = 0; i < n; ++i) {
    size_t ip = closed ? (i + 1) % n : std::min(i + 1, n - 1);
    size_t im = closed ? (i + n - 1) % n : (i == 0 ? 0 : i - 1);
    double a = std::abs(pts[ip] - pts[i]), b = std::abs(pts[i] - pts[im]);
    w[i] = 0.5 * (a + b);
    du[i] = (u[ip] - u[im]) / (a + b);
  }
  std::vector<double> row(n);
  parallel_for((int)n, [&](int i) {
    double s = w[i] * w[i] * du[i] * du[i];  // diagonal bin: limit of the difference quotient
    for (size_t j = 0; j < n; ++j) {
      if ((int)j == i) continue;
      double d = u[i] - u[j];
      s += w[i] * w[j] * d * d / std::norm(pts[i] - pts[j]);
    }
    row[i] = s;
  });
  double total = 0;
  for (double r : row) total += r;
  for (double r : du)
    if (!std::isfinite(r)) throw ComputationError("h12 seminorm diverges");
  return total / (2 * kPi * kPi);
}

HarmonicExt poisson_extend(const std::vector<double>& samples, bool exterior) {
  HarmonicExt h;
  h.exterior = exterior;
  Laurent in = harmonic_series(samples);
  if (!exterior) {
    h.H = in;
    return h;
  }
  h.H.lo = -in.hi();
  h.H.c.resize(in.c.size());
  for (int p = 0; p <= in.hi(); ++p) h.H.c[-p - h.H.lo] = std::conj(in.coef(p));
  return h;
}

HarmonicExt poisson_extend(const BoundaryFunction& bf, const JordanCurve& curve, const ConformalPair& pair, Side side, int n) {
  if (n <= 0) n = pair.boundary_n;
  const auto& sd = pair.side(side);
  auto S = sd.S.ring(1.0, n);
  std::vector<double> vals(n);
  double tail = 0.5 * (bf.values.front() + bf.values.back());
  for (int k = 0; k < n; ++k) {
    cd z = pair.post(S[k]);
    if (!finite(z) || (!curve.is_loop() && std::abs(z) > 1e12)) {
      vals[k] = tail;
      continue;
    }
    vals[k] = bf.at(param_of_point(curve, z));
    if (!std::isfinite(vals[k])) throw ComputationError("non-finite boundary data");
  }
  return poisson_extend(vals, sd.exterior);
}

HarmonicExt harmonic_conjugate(const HarmonicExt& u) {
  HarmonicExt c = u;
  for (auto& x : c.H.c) x *= cd(0, -1);
  // normalize to vanish at the center (or at infinity)
  for (size_t j = 0; j < c.H.c.size(); ++j)
    if (c.H.lo + (int)j == 0) c.H.c[j] = cd(0, c.H.c[j].imag());
  return c;
}

HarmonicExt harmonic_conjugate(const ScalarField& u, int n) {
  // Laplacian probe on an interior grid
  double h = 1e-3, worst = 0;
  for (double r : {0.1, 0.4, 0.7})
    for (int k = 0; k < 8; ++k) {
      cd z = std::polar(r, 2 * kPi * k / 8);
      double lap = (u.value(z + h) + u.value(z - h) + u.value(z + cd(0, h)) + u.value(z - cd(0, h)) - 4 * u.value(z)) / (h * h);
      worst = std::max(worst, std::abs(lap));
    }
  if (worst > 1e-2) throw ComputationError("field is not harmonic, Laplacian residual " + std::to_string(worst));
  std::vector<double> s(n);
  for (int k = 0; k < n; ++k) s[k] = u.value(std::polar(1.0, 2 * kPi * k / n));
  return harmonic_conjugate(poisson_extend(s, false));
}

namespace {

// average over the disk or half-disk of radius r around z; half-disks open toward `normal`
double disk_average(const std::function<double(cd)>& f, cd z, double r, cd normal, bool half) {
  const Rule& rr = gl_rule(8);
  const Rule& ra = gl_rule(16);
  double num = 0, den = 0;
  double beta = std::arg(normal);
  for (size_t i = 0; i < rr.x.size(); ++i) {
    double rho = 0.5 * r * (1 + rr.x[i]);
    double wr = 0.5 * r * rr.w[i] * rho;
    if (half) {
      for (size_t j = 0; j < ra.x.size(); ++j) {
        double phi = beta + 0.5 * kPi * ra.x[j];
        double w = wr * 0.5 * kPi * ra.w[j];
        num += w * f(z + std::polar(rho, phi));
        den += w;
      }
    } else {
      const int m = 32;
      for (int j = 0; j < m; ++j) {
        double w = wr * 2 * kPi / m;
        num += w * f(z + std::polar(rho, 2 * kPi * (j + 0.5) / m));
        den += w;
      }
    }
  }
  return num / den;
}

}  // namespace

BoundaryFunction trace(const std::function<double(cd)>& field, const std::vector<cd>& points, const std::vector<cd>& tangents,
                       TraceSide side, double local_scale, const TraceOptions& opt) {
  BoundaryFunction bf;
  bf.carrier = Carrier::Curve;
  size_t n = points.size();
  bf.values.resize(n);
  bf.valid.resize(n);
  bf.nodes.resize(n);
  double r0 = opt.r0 > 0 ? opt.r0 : 0.05 * local_scale;
  bool half = side != TraceSide::Both;
  int p = half ? 1 : 2;
  std::vector<double> vals(n);
  std::vector<char> ok(n);
  parallel_for((int)n, [&](int i) {
    cd normal = tangents[i] * cd(0, side == TraceSide::Exterior ? -1 : 1);
    int K = opt.levels;
    std::vector<std::vector<double>> T(K + 1, std::vector<double>(K + 1));
    for (int k = 0; k <= K; ++k) {
      T[k][0] = disk_average(field, points[i], r0 * std::pow(2.0, -k), normal, half);
      for (int j = 1; j <= k; ++j) {
        double f = std::pow(2.0, p * j);
        T[k][j] = T[k][j - 1] + (T[k][j - 1] - T[k - 1][j - 1]) / (f - 1);
      }
    }
    vals[i] = T[K][K];
    ok[i] = std::abs(T[K][K] - T[K - 1][K - 1]) < opt.tol;
  });
  for (size_t i = 0; i < n; ++i) {
    bf.nodes[i] = double(i);
    bf.values[i] = vals[i];
    bf.valid[i] = ok[i];
  }
  return bf;
}

BoundaryFunction trace(const ScalarField& field, const JordanCurve& curve, TraceSide side, const TraceOptions& opt) {
  std::vector<cd> tang(curve.size());
  for (size_t k = 0; k < curve.size(); ++k) tang[k] = curve.tangent(curve.params[k]);
  double scale = std::min(1.0, curve.diameter() / 4);
  auto bf = trace(field.value, curve.points, tang, side, scale, opt);
  bf.nodes = curve.params;
  bf.arclength = curve.arclength;
  return bf;
}

Decomposition decompose(const SideField& u, int n, const QuadOptions& q) {
  Decomposition d;
  d.harmonic = poisson_extend(u.boundary(n), u.is_exterior());
  d.zero_trace = u;
  d.zero_trace.H = combine(u.a_h != 0 ? u.H : Laurent{}, u.a_h, d.harmonic.H, -1.0);
  d.zero_trace.a_h = 1.0;
  d.energy_total = dirichlet_energy(u, q).value;
  d.energy_zero = dirichlet_energy(d.zero_trace, q).value;
  d.energy_harmonic = d.harmonic.energy();
  return d;
}

double curvature_action(const SideField& u, const QuadOptions& q) {
  const int n = 2048;
  auto b = u.boundary(n);
  double mean = 0;
  for (double v : b) mean += v;
  mean /= n;
  double k = u.is_exterior() ? -1.0 : 1.0;
  return dirichlet_energy(u, q).value + k * (2 / kPi) * (2 * kPi * mean);
}

}  // namespace weldlab
