#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "weldlab/geometry.hpp"
#include "weldlab/series.hpp"

namespace weldlab {

enum class Geometry { Disk, HalfPlane };
enum class Side { Interior, Exterior };

// One side of a conformal pair at disk level. The reference-domain map is
// post( S( pre(z) ) ), with S a series on the unit disk (interior, powers >= 0)
// or on the exterior disk (powers <= 1).
struct SideMap {
  bool exterior = false;
  Laurent S, dS;
  // log of the derivative up to an additive constant; for half-plane pairs it already
  // absorbs the Mobius factors so that log f'(z) = log_const + logder(pre(z)).
  Laurent logder, dlogder;
  cd log_const{0};
  Mobius pre;  // reference domain (D, D*, H or H*) onto the disk coordinate
};

struct ConformalPair {
  JordanCurve curve;
  Geometry geometry = Geometry::Disk;
  Mobius post;  // identity for disk pairs
  SideMap f, g;
  int boundary_n = 0;
  std::map<std::string, double> diagnostics;

  const SideMap& side(Side s) const { return s == Side::Interior ? f : g; }
  // maps and derivatives on the reference domain
  cd map(Side s, cd z) const;
  cd log_deriv(Side s, cd z) const;
  // disk-level image post(S(w)) and derivative d/dw of it
  cd disk_map(Side s, cd w) const;
  cd disk_map_deriv(Side s, cd w) const;
  // reference boundary point for a boundary parameter (angle on the circle, x on R)
  cd boundary_point(Side s, double t) const;
  // inverse boundary correspondence: parameter whose image is the given curve point
  double boundary_preimage(Side s, cd point) const;
  // boundary values of the disk coordinate: w = pre(boundary_point)
  cd disk_coord(Side s, double t) const;
};

struct MapOptions {
  int boundary_n = 0;  // 0 selects automatically
  int max_iter = 200;
  double tol = 1e-10;
  double damping = 0.5;
  double gap = 0;  // half-plane auxiliary point offset; 0 selects automatically
  bool zipper_only = false;  // skip the correspondence iteration
};

// Theodorsen fixed point for the interior map of a star-shaped loop around 0, with
// S(0) = 0, S'(0) > 0. Returns boundary samples S(e^{2 pi i k / n}).
struct TheodorsenResult {
  std::vector<cd> boundary;
  std::vector<double> curve_param;
  int iterations = 0;
  double correction = 0;
};
TheodorsenResult theodorsen(const std::function<cd(double)>& loop, int n, const MapOptions& opt);

ConformalPair map_curve(const JordanCurve& curve, Geometry geometry, const MapOptions& opt = {});

// Assemble pairs from disk-level series. Half-plane pairs need S_f(1) = S_g(1) = post.pole().
ConformalPair disk_pair(JordanCurve curve, Laurent F, Laurent G, int boundary_n);
ConformalPair halfplane_pair(JordanCurve curve, Laurent F, Laurent G, Mobius post, double af, double bf,
                             double ag, double bg, int boundary_n);

struct LogDerivField {
  std::function<double(cd)> log_abs;  // log|f'| on the reference domain
  std::function<double(cd)> arg;      // continuous branch of arg f'
  double energy = 0;                  // Dirichlet energy of log|f'| on the reference domain
};
LogDerivField log_deriv(const ConformalPair& pair, Side side);

struct Homeomorphism {
  Carrier domain = Carrier::Line;
  std::vector<double> x, h, logd;  // nodes, values, log h'
  double eval(double t) const;
  double deriv(double t) const;
  // inverse by monotone bracketing
  double inverse(double y) const;
  double h12_logd() const;  // H^{1/2} seminorm squared of log h'
  double max_qs_ratio() const;
};

Homeomorphism welding_homeo(const ConformalPair& pair, int n = 0, double window = 40.0);

// boundary parameter grids used for welding data
std::vector<double> welding_nodes(Carrier c, int n, double window);

}  // namespace weldlab
