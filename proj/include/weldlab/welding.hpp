#pragma once

#include <optional>
#include <vector>

#include "weldlab/conformal.hpp"
#include "weldlab/dirichlet.hpp"
#include "weldlab/field.hpp"
#include "weldlab/loewner.hpp"

namespace weldlab {

// Measure e^u dx on R or e^u dtheta on the circle, with its cumulative mass.
// On R the mass is counted from 0 and continued linearly beyond the window;
// on the circle it is counted from angle 0 and normalized to total mass 2 pi.
struct BoundaryDensity {
  Carrier carrier = Carrier::Line;
  std::vector<double> nodes, log_density;
  std::vector<double> mass;  // cumulative mass at the nodes
  double log_total = 0;      // circle: log of the raw total mass

  double log_at(double x) const;
  double cumulative(double x) const;
  double inverse(double m) const;

  static BoundaryDensity build(const BoundaryFunction& u, Carrier carrier);

 private:
  std::function<double(double)> eval_;
  std::vector<cd> fourier_;  // circle: coefficients of e^u
};

// boundary values of a side field at reference boundary parameters (x on R or angles)
BoundaryFunction boundary_values(const SideField& u, const std::vector<double>& nodes);
// log|f'| or log|g'| along the reference boundary, with an exact evaluator
BoundaryFunction boundary_log_derivative(const ConformalPair& pair, Side side, const std::vector<double>& nodes);

struct CutResult {
  SideField u, v;
  double plane_energy = 0, loewner_energy = 0, energy_u = 0, energy_v = 0;
  IdentityReport report;
};
// u = phi o f + log|f'|, v = phi o g + log|g'|, with the cutting identity report.
CutResult cut(const ScalarField& phi, const ConformalPair& pair, const QuadOptions& q = {});

// h = h_v^{-1} o h_u, the homeomorphism matching the two boundary measures.
Homeomorphism isometric_homeo(const BoundaryFunction& u, const BoundaryFunction& v, Carrier carrier);

struct WeldOptions {
  int collocation = 1024;
  int terms = 0;  // 0 means collocation / 4
};
struct WeldResult {
  JordanCurve curve;
  ConformalPair pair;
  double residual = 0;  // max collocation residual
  int terms = 0;
};
// Normalized conformal welding: circle solutions have f(0) = 0, f(1) = 1 and g = id + O(1) at
// infinity up to that affine map; line solutions fix 0, 1 and infinity.
WeldResult weld_solve(const Homeomorphism& h, const WeldOptions& opt = {});

// Sup distance between the interior boundary maps of two pairs after the affine normalization
// sending f(p0) to 0 and f(p1) to 1 (p0, p1 = 0, 1 on R, or the angles 0 and pi on the circle
// using f(0) and f(1) for disk pairs). Line pairs are compared where |f| <= radius.
double normalized_distance(const ConformalPair& a, const ConformalPair& b, double radius = 10.0);

// Reference-domain field u given in the coordinates of its own pair, re-expressed in the disk
// coordinates of another pair with the same geometry.
ScalarField transport(const SideField& u, const ConformalPair& target, Side side);

struct PushforwardCheck {
  double lo = 0, hi = 0;  // reference interval
  double reference_mass = 0, curve_mass = 0;
  double relative = 0;
};
struct AmbientResult {
  bool glued = false;
  SideField inside, outside;  // ambient field pulled back by f and g
  double energy_inside = 0, energy_outside = 0;
  double energy = 0;  // plane energy of the glued field
  double max_mismatch = 0;
  BoundaryFunction mismatch;
  std::vector<PushforwardCheck> pushforward;
  double pushforward_max = 0;
  IdentityReport report;

  // ambient field at a plane point, through the inverse maps
  double value(const ConformalPair& pair, cd z) const;
};
constexpr double kTraceMismatchTol = 1e-2;
AmbientResult ambient_field(const SideField& u, const SideField& v, const ConformalPair& pair,
                            const QuadOptions& q = {});

// Point of the reference domain whose image under the side map is z; nullopt when z is on the other side.
std::optional<cd> inverse_map(const ConformalPair& pair, Side side, cd z);

struct ArclengthWeld {
  WeldResult first, second;  // welds interior of curve 1 to exterior of curve 2, and the reverse
  double energy_first = 0, energy_second = 0, energy_1 = 0, energy_2 = 0;
  double length_scale = 1;  // factor applied to curve 2 (bounded case)
  IdentityReport report;    // lhs = I(eta1) + I(eta2), rhs = I(eta) + I(eta~)
};
// Marked points are glued to each other; by default the images of the reference point 0
// (angle 0 or x = 0) on each curve.
struct ArclengthMarks {
  std::optional<cd> first, second;
};
ArclengthWeld arclength_weld(const JordanCurve& c1, const JordanCurve& c2, const ArclengthMarks& marks = {},
                             const WeldOptions& opt = {});

// d_n u + (d_n* v) o h * h' on the shared boundary nodes (outward normals of each side).
// Circle carriers include the curvature of the unit circle: d_n u + 1 + (d_n* v o h - 1) h'.
BoundaryFunction curvature_residual(const SideField& u, const SideField& v, const Homeomorphism& h);

}  // namespace weldlab
