#include "weldlab/loewner.hpp"

#include <algorithm>
#include <cmath>

#include "weldlab/parallel.hpp"

namespace weldlab {

namespace {

LoewnerEnergy clamp_energy(double raw) {
  LoewnerEnergy e;
  e.raw = raw;
  e.value = raw;
  if (raw < 0) {
    if (raw < -kEnergyClampTol) throw ComputationError("negative Loewner energy beyond tolerance");
    e.value = 0;
    e.clamped = true;
  }
  return e;
}

// branch of c + sqrt((z - c)^2 + s) mapping the upper half-plane into itself
cd slit_sqrt(cd u, cd ref) {
  cd r = std::sqrt(u);
  if (r.imag() < 0 || (r.imag() == 0 && r.real() * ref.real() < 0)) r = -r;
  return r;
}

}  // namespace

LoewnerEnergy loop_energy(const ConformalPair& pair) {
  if (pair.geometry != Geometry::Disk) throw ConfigError("loop energy needs a disk pair");
  const auto& f = pair.f;
  const auto& g = pair.g;
  double raw = series_energy(f.logder) + series_energy(g.logder) + 4 * (f.log_const + f.logder.coef(0)).real() -
               4 * (g.log_const + g.logder.coef(0)).real();
  return clamp_energy(raw);
}

LoewnerEnergy loop_energy(const JordanCurve& curve, const MapOptions& opt) {
  if (!curve.is_loop()) throw ConfigError("loop energy needs a bounded loop");
  return loop_energy(map_curve(curve, Geometry::Disk, opt));
}

LoewnerEnergy line_energy(const ConformalPair& pair) {
  if (pair.geometry != Geometry::HalfPlane) throw ConfigError("line energy needs a half-plane pair");
  return clamp_energy(series_energy(pair.f.logder) + series_energy(pair.g.logder));
}

LoewnerEnergy line_energy(const JordanCurve& curve, const MapOptions& opt) {
  if (curve.is_loop()) throw ConfigError("line energy needs a curve through infinity");
  return line_energy(map_curve(curve, Geometry::HalfPlane, opt));
}

LoewnerEnergy curve_energy(const JordanCurve& curve, const MapOptions& opt) {
  return curve.is_loop() ? loop_energy(curve, opt) : line_energy(curve, opt);
}

double DrivingFunction::operator()(double s) const {
  if (t.empty()) throw ConfigError("empty driving function");
  if (s <= t.front()) return lambda.front();
  if (s >= t.back()) return lambda.back();
  size_t k = std::upper_bound(t.begin(), t.end(), s) - t.begin();
  double w = (s - t[k - 1]) / (t[k] - t[k - 1]);
  return lambda[k - 1] * (1 - w) + lambda[k] * w;
}

void DrivingFunction::validate() const {
  if (t.size() < 2 || t.size() != lambda.size()) throw ConfigError("driving function needs at least two nodes");
  if (t.front() != 0.0) throw ConfigError("driving function must start at t = 0");
  for (size_t k = 0; k < t.size(); ++k) {
    if (!std::isfinite(t[k]) || !std::isfinite(lambda[k])) throw ConfigError("non-finite driving data");
    if (k > 0 && !(t[k] > t[k - 1])) throw ConfigError("driving time nodes must increase strictly");
  }
}

double driving_energy(const DrivingFunction& d) {
  if (d.t.size() != d.lambda.size()) throw ConfigError("driving function size mismatch");
  double e = 0;
  for (size_t k = 1; k < d.t.size(); ++k) {
    double dt = d.t[k] - d.t[k - 1];
    if (!(dt > 0)) throw ConfigError("zero-length time step in driving function");
    double dl = d.lambda[k] - d.lambda[k - 1];
    e += dl * dl / dt;
  }
  return 0.5 * e;
}

Chord drive_to_trace(const DrivingFunction& d, int steps_per_unit) {
  d.validate();
  if (steps_per_unit < 1) throw ConfigError("steps per unit capacity must be positive");
  double T = d.horizon();
  int n = std::max(1, (int)std::ceil(T * steps_per_unit));
  double dt = T / n;
  std::vector<double> c(n);
  for (int k = 0; k < n; ++k) c[k] = d((k + 0.5) * dt);
  Chord out;
  out.times.push_back(0);
  out.points.push_back(d(0.0));
  double s = 4 * dt;
  for (int k = 0; k < n; ++k) {
    // tip of the k-th slit, pulled back through the earlier slit maps
    cd w = c[k] + slit_sqrt(cd(-s, 0), cd(0, 1));
    for (int j = k - 1; j >= 0; --j) {
      cd u = w - c[j];
      w = c[j] + slit_sqrt(u * u - s, u);
    }
    out.times.push_back((k + 1) * dt);
    out.points.push_back(w);
  }
  double scale = 0;
  for (auto& z : out.points) scale = std::max(scale, std::abs(z - out.points[0]));
  if (!polyline_simple(out.points, false, 1e-12 * std::max(1.0, scale)))
    throw ComputationError("discrete trace self-intersects; refine the time step");
  return out;
}

DrivingFunction trace_to_drive(const std::vector<cd>& points) {
  if (points.size() < 2) throw ConfigError("chord needs at least two points");
  if (std::abs(points[0].imag()) > 1e-12) throw ConfigError("chord must start on the real line");
  DrivingFunction d;
  d.t.push_back(0);
  d.lambda.push_back(points[0].real());
  std::vector<double> c, s;
  double scale = 0;
  for (auto& z : points) scale = std::max(scale, std::abs(z - points[0]));
  for (size_t k = 1; k < points.size(); ++k) {
    cd w = points[k];
    if (w.imag() <= 0) throw ConfigError("chord leaves the upper half-plane");
    for (size_t j = 0; j < c.size(); ++j) {
      cd u = w - c[j];
      w = c[j] + slit_sqrt(u * u + s[j], u);
    }
    if (w.imag() < -1e-12 * scale) throw ConfigError("chord increment leaves the upper half-plane");
    double dt = w.imag() * w.imag() / 4;
    if (!(dt > 1e-15 * scale * scale)) throw ComputationError("capacity step underflow");
    c.push_back(w.real());
    s.push_back(4 * dt);
    d.t.push_back(d.t.back() + dt);
    d.lambda.push_back(w.real());
  }
  return d;
}

std::vector<Equipotential> equipotentials(const ConformalPair& pair, const std::vector<double>& params,
                                          const MapOptions& opt) {
  bool disk = pair.geometry == Geometry::Disk;
  for (double p : params) {
    if (disk && !(p > 0 && p < 1)) throw ConfigError("equipotential radius must lie in (0, 1)");
    if (!disk && !(p > 0)) throw ConfigError("equipotential height must be positive");
  }
  std::vector<Equipotential> out(params.size());
  std::vector<std::string> errors(params.size());
  const ConformalPair* P = &pair;
  parallel_for((int)params.size(), [&](int i) {
    double p = params[i];
    try {
      Equipotential e;
      e.param = p;
      if (disk) {
        e.curve = make_curve(CurveKind::BoundedLoop, "equipotential",
                             [P, p](double t) { return P->map(Side::Interior, std::polar(p, t)); }, loop_nodes(1024));
        e.energy = loop_energy(e.curve, opt);
      } else {
        e.curve = make_curve(CurveKind::ThroughInfinity, "equipotential",
                             [P, p](double x) { return P->map(Side::Interior, cd(x, p)); }, line_nodes(1025, kEscapeRadius));
        e.energy = line_energy(e.curve, opt);
      }
      out[i] = std::move(e);
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  });
  for (auto& e : errors)
    if (!e.empty()) throw ComputationError("equipotential failed: " + e);
  return out;
}

}  // namespace weldlab
