#include "weldlab/flowline.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>

namespace weldlab {

namespace {

using State = std::array<double, 2>;

struct Node {
  double s;
  cd z, dz;
};

std::vector<Node> integrate_one_way(const ScalarField& phi, cd z0, double dir, double R, const FlowOptions& opt) {
  namespace odeint = boost::numeric::odeint;
  // the backward branch solves z' = -exp(i phi) in forward time (the stepper's step bound
  // assumes increasing time)
  auto rhs = [&phi, dir](const State& x, State& dxdt, double) {
    double a = phi.value(cd(x[0], x[1]));
    dxdt[0] = dir * std::cos(a);
    dxdt[1] = dir * std::sin(a);
  };
  auto stepper = odeint::make_dense_output(opt.abs_tol, 0.0, opt.max_step, odeint::runge_kutta_dopri5<State>());
  State x{z0.real(), z0.imag()};
  stepper.initialize(x, 0.0, opt.max_step / 4);
  std::vector<Node> out;
  auto push = [&](double s, const State& st) {
    cd z(st[0], st[1]);
    out.push_back({s, z, std::polar(1.0, phi.value(z))});
  };
  push(0.0, x);
  while (true) {
    auto [t0, t1] = stepper.do_step(rhs);
    (void)t0;
    const State& cur = stepper.current_state();
    push(dir * t1, cur);
    if (std::abs(cd(cur[0], cur[1])) > R) break;
    if (t1 > opt.max_length) throw ComputationError("flow-line does not leave the escape disk");
    if (!std::isfinite(cur[0]) || !std::isfinite(cur[1])) throw ComputationError("flow-line integration failed");
  }
  return out;
}

JordanCurve flowline_curve(const ScalarField& phi, cd z0, const FlowOptions& opt) {
  double R = opt.escape;
  if (phi.has_box())
    for (cd c : {phi.box_lo, phi.box_hi, cd(phi.box_lo.real(), phi.box_hi.imag()), cd(phi.box_hi.real(), phi.box_lo.imag())})
      R = std::max(R, 1.5 * std::abs(c));
  R = std::max(R, 2 * std::abs(z0) + 1);
  auto fwd = integrate_one_way(phi, z0, 1.0, R, opt);
  auto bwd = integrate_one_way(phi, z0, -1.0, R, opt);
  std::vector<Node> nodes(bwd.rbegin(), bwd.rend() - 1);
  nodes.insert(nodes.end(), fwd.begin(), fwd.end());
  std::vector<double> s(nodes.size());
  for (size_t k = 0; k < nodes.size(); ++k) s[k] = nodes[k].s;
  auto ev = [nodes](double t) {
    const Node& a = nodes.front();
    const Node& b = nodes.back();
    if (t <= a.s) return a.z + a.dz * (t - a.s);
    if (t >= b.s) return b.z + b.dz * (t - b.s);
    size_t k = std::upper_bound(nodes.begin(), nodes.end(), t, [](double v, const Node& n) { return v < n.s; }) - nodes.begin();
    const Node& p = nodes[k - 1];
    const Node& q = nodes[k];
    double h = q.s - p.s, u = (t - p.s) / h, u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p.z + (u3 - 2 * u2 + u) * h * p.dz + (-2 * u3 + 3 * u2) * q.z + (u3 - u2) * h * q.dz;
  };
  auto c = make_curve(CurveKind::ThroughInfinity, "flowline", ev, s);
  c.meta["escape_radius"] = R;
  c.meta["abs_tol"] = opt.abs_tol;
  c.meta["start_re"] = z0.real();
  c.meta["start_im"] = z0.imag();
  return c;
}

Laurent times_i(const Laurent& s) {
  Laurent r = s;
  for (auto& c : r.c) c *= cd(0, 1);
  return r;
}

double energy(const SideField& u, const QuadOptions& q) { return dirichlet_energy(u, q).value; }

void require_flowline(const ScalarField& phi, const JordanCurve& eta) {
  double tc = tangent_consistency(phi, eta);
  if (tc > kFlowlinePrecondition)
    throw ConfigError("curve is not a flow-line of the field (tangent mismatch " + std::to_string(tc) + ")");
}

}  // namespace

JordanCurve integrate_flowline(const ScalarField& phi, cd z0, const FlowOptions& opt) {
  if (!phi.c_inf) throw ConfigError("flow-line fields must be constant near infinity");
  try {
    return flowline_curve(phi, z0, opt);
  } catch (const ConfigError&) {
    // self-intersecting samples: retry once with a finer step before reporting
  }
  FlowOptions fine = opt;
  fine.abs_tol /= 10;
  fine.max_step /= 2;
  try {
    return flowline_curve(phi, z0, fine);
  } catch (const ConfigError&) {
    throw ComputationError("flow-line samples self-intersect: discretization failure");
  }
}

double tangent_consistency(const ScalarField& phi, const JordanCurve& eta) {
  double worst = 0;
  size_t n = eta.params.size();
  for (size_t k = 0; k < n; ++k) {
    std::vector<double> ts{eta.params[k]};
    if (k + 1 < n) ts.push_back(0.5 * (eta.params[k] + eta.params[k + 1]));
    for (double t : ts) {
      double a = std::arg(eta.tangent(t));
      worst = std::max(worst, std::abs(std::remainder(a - phi.value(eta.eval(t)), 2 * kPi)));
    }
  }
  return worst;
}

IdentityReport flowline_identity(const ScalarField& phi, const JordanCurve& eta, const QuadOptions& q) {
  require_flowline(phi, eta);
  return flowline_identity(phi, map_curve(eta, Geometry::HalfPlane), q);
}

IdentityReport flowline_identity(const ScalarField& phi, const ConformalPair& pair, const QuadOptions& q) {
  if (pair.geometry != Geometry::HalfPlane) throw ConfigError("flow-line identity needs a half-plane pair");
  require_flowline(phi, pair.curve);
  SideField in = SideField::on(pair, Side::Interior), out = SideField::on(pair, Side::Exterior);
  in.phi = phi;
  out.phi = phi;
  auto di = decompose(in, 1024, q), dout = decompose(out, 1024, q);
  IdentityReport r;
  r.label = "flowline";
  r.lhs = dirichlet_energy_plane(phi, q);
  double loewner = line_energy(pair).value;
  r.rhs = {{"loewner_energy", loewner}, {"zero_trace_energy", di.energy_zero + dout.energy_zero}};
  r.finalize();
  r.metadata["harmonic_energy"] = di.energy_harmonic + dout.energy_harmonic;
  r.metadata["pullback_energy"] = di.energy_total + dout.energy_total;
  r.metadata["pythagoras_residual"] =
      di.energy_total + dout.energy_total - (di.energy_harmonic + dout.energy_harmonic + di.energy_zero + dout.energy_zero);
  r.metadata["tangent_consistency"] = tangent_consistency(phi, pair.curve);
  return r;
}

IdentityReport winding_identity(const JordanCurve& curve, int probes) {
  return winding_identity(map_curve(curve, Geometry::HalfPlane), probes);
}

IdentityReport winding_identity(const ConformalPair& pair, int probes) {
  if (pair.geometry != Geometry::HalfPlane) throw ConfigError("winding identity needs a curve through infinity");
  auto tau = winding(pair.curve);
  auto pin = poisson_extend(tau, pair.curve, pair, Side::Interior);
  auto pout = poisson_extend(tau, pair.curve, pair, Side::Exterior);
  IdentityReport r;
  r.label = "winding";
  r.lhs = line_energy(pair).value;
  r.rhs = {{"interior_energy", pin.energy()}, {"exterior_energy", pout.energy()}};
  r.finalize();
  // arg f' against the harmonic extension of the winding, on a grid in the upper half-plane
  int side = std::max(1, (int)std::lround(std::sqrt((double)probes)));
  double worst = 0;
  int count = 0;
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j) {
      double x = side == 1 ? 0.0 : -3.0 + 6.0 * i / (side - 1);
      double y = 0.05 * std::pow(60.0, side == 1 ? 0.5 : double(j) / (side - 1));
      cd z(x, y);
      double a = pair.log_deriv(Side::Interior, z).imag();
      double p = pin.value(pair.f.pre(z));
      worst = std::max(worst, std::abs(std::remainder(a - p, 2 * kPi)));
      ++count;
    }
  r.metadata["probe_max"] = worst;
  r.metadata["probes"] = count;
  return r;
}

IdentityReport complex_identity(const ComplexField& psi, const ConformalPair& pair, const QuadOptions& q) {
  return complex_identity(psi.re, ImaginaryPart{psi.im}, pair, q);
}

IdentityReport complex_identity(const ScalarField& re, const ImaginaryPart& im, const ConformalPair& pair,
                                const QuadOptions& q) {
  if (pair.geometry != Geometry::HalfPlane) throw ConfigError("complex identity needs a half-plane pair");
  IdentityReport r;
  r.label = "complex";
  SideField re_in = SideField::on(pair, Side::Interior), re_out = SideField::on(pair, Side::Exterior);
  re_in.phi = re;
  re_out.phi = re;
  re_in.a_log = 1;
  re_out.a_log = 1;
  // imaginary parts: Im psi o f - arg f', written as Re(i log f') = -arg f'
  SideField im_in = SideField::on(pair, Side::Interior), im_out = SideField::on(pair, Side::Exterior);
  im_in.a_h = 1;
  im_out.a_h = 1;
  double plane_im = 0;
  if (im.field) {
    require_flowline(*im.field, pair.curve);
    im_in.phi = *im.field;
    im_out.phi = *im.field;
    im_in.H = times_i(pair.f.logder);
    im_out.H = times_i(pair.g.logder);
    plane_im = dirichlet_energy_plane(*im.field, q);
  } else {
    auto tau = winding(pair.curve);
    auto pin = poisson_extend(tau, pair.curve, pair, Side::Interior);
    auto pout = poisson_extend(tau, pair.curve, pair, Side::Exterior);
    im_in.H = combine(pin.H, 1.0, times_i(pair.f.logder), 1.0);
    im_out.H = combine(pout.H, 1.0, times_i(pair.g.logder), 1.0);
    plane_im = pin.energy() + pout.energy();
    r.notes["imaginary_part"] = "harmonic extension of the winding";
  }
  double plane_re = dirichlet_energy_plane(re, q);
  double zeta = energy(re_in, q) + energy(im_in, q);
  double xi = energy(re_out, q) + energy(im_out, q);
  r.lhs = plane_re + plane_im;
  r.rhs = {{"interior_energy", zeta}, {"exterior_energy", xi}};
  r.finalize();
  r.metadata["plane_energy_re"] = plane_re;
  r.metadata["plane_energy_im"] = plane_im;
  r.metadata["loewner_energy"] = line_energy(pair).value;
  return r;
}

SweepResult monotonicity_sweep(const ConformalPair& pair, std::vector<double> params, const MapOptions& opt) {
  if (params.size() < 2) throw ConfigError("monotonicity sweep needs at least two parameters");
  std::sort(params.begin(), params.end());
  bool disk = pair.geometry == Geometry::Disk;
  SweepResult out;
  out.levels = equipotentials(pair, params, opt);
  for (size_t k = 0; k + 1 < params.size(); ++k) {
    double lo = out.levels[k].energy.value, hi = out.levels[k + 1].energy.value;
    IdentityReport r;
    r.label = disk ? "monotone_in_r" : "monotone_in_y";
    // expected: the first listed energy dominates
    r.lhs = disk ? hi : lo;
    r.rhs = {{"compared_level", disk ? lo : hi}};
    r.finalize();
    double violation = std::max(0.0, -r.residual);
    r.metadata["param_a"] = params[k];
    r.metadata["param_b"] = params[k + 1];
    r.metadata["violation"] = violation;
    r.notes["verdict"] = violation <= 1e-6 ? "monotone" : "violation";
    out.worst_violation = std::max(out.worst_violation, violation);
    out.verdicts.push_back(r);
  }
  double curve_energy = disk ? loop_energy(pair).value : line_energy(pair).value;
  const auto& nearest = disk ? out.levels.back() : out.levels.front();
  auto& e = out.endpoint;
  e.label = "equipotential_limit";
  e.lhs = curve_energy;
  e.rhs = {{"nearest_level", nearest.energy.value}};
  e.finalize();
  e.metadata["param"] = nearest.param;
  e.metadata["relative_gap"] = curve_energy > 0 ? std::abs(curve_energy - nearest.energy.value) / curve_energy : 0.0;
  return out;
}

}  // namespace weldlab
