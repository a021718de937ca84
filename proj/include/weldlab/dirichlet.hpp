#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "weldlab/conformal.hpp"
#include "weldlab/field.hpp"
#include "weldlab/parallel.hpp"
#include "weldlab/series.hpp"

namespace weldlab {

struct QuadOptions {
  int n_theta = 1024;
  int gl_order = 8;
  std::vector<double> deltas{1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};
  int plane_order = 8;
};

struct EnergyResult {
  double value = 0;
  std::vector<double> at_delta;  // raw quadrature values for each cut-off
};

// |grad u|^2 at the nodes r e^{2 pi i k / n}, k = 0..n-1
using RingIntegrand = std::function<void(double r, int n, std::vector<double>& out)>;

// (1/pi) int_D |grad u|^2 by the polar tensor rule with cut-off extrapolation.
EnergyResult disk_energy(const RingIntegrand& integrand, const QuadOptions& q = {});
// (1/pi) int over a box of |grad|^2 by tensor Gauss-Legendre panels
double box_energy(const std::function<cd(cd)>& grad, cd lo, cd hi, double panel, int order);

// A field on one side of a curve expressed on the disk-level reference domain:
//   phi(post(S(w))) + local(w) + a_log * Re logder(w) + a_h * Re H(w) + offset
// Without a side map the plane field is read directly at w (reference-domain field).
struct SideField {
  const ConformalPair* pair = nullptr;
  Side side = Side::Interior;
  bool exterior = false;  // only used without a pair
  std::optional<ScalarField> phi;
  double a_log = 0;
  Laurent H;
  double a_h = 0;
  double offset = 0;
  std::optional<ScalarField> local;  // read at the disk coordinate itself

  static SideField on(const ConformalPair& p, Side s) {
    SideField f;
    f.pair = &p;
    f.side = s;
    return f;
  }
  bool is_exterior() const { return pair ? pair->side(side).exterior : exterior; }
  double value(cd w) const;
  cd grad(cd w) const;
  // boundary samples at w = e^{2 pi i k / n}
  std::vector<double> boundary(int n) const;
};

EnergyResult dirichlet_energy(const SideField& u, const QuadOptions& q = {});
// plane energy of a bare field: Cartesian quadrature over its support box
double dirichlet_energy_plane(const ScalarField& phi, const QuadOptions& q = {});
// plane energy of a field split by a curve: sum of the two pullback energies
double dirichlet_energy_plane(const ScalarField& phi, const ConformalPair& pair, const QuadOptions& q = {});

// H^{1/2} seminorm squared.
// Spectral path for equispaced samples on the circle.
double h12_seminorm_spectral(const std::vector<double>& samples);
// Double-integral path; points are the carrier samples (closed when `closed`), values the data.
double h12_seminorm(const std::vector<cd>& points, const std::vector<double>& values, bool closed);

// Harmonic extension of boundary data into the disk (exterior = false) or exterior disk.
struct HarmonicExt {
  Laurent H;  // u = Re H
  bool exterior = false;
  double value(cd w) const { return H(w).real(); }
  cd grad(cd w) const { return std::conj(H.deriv()(w)); }
  double energy() const { return series_energy(H); }
};
HarmonicExt poisson_extend(const std::vector<double>& samples, bool exterior);
// data on a curve side, transported by the pair to the disk-level reference domain
HarmonicExt poisson_extend(const BoundaryFunction& bf, const JordanCurve& curve, const ConformalPair& pair, Side side, int n = 0);

HarmonicExt harmonic_conjugate(const HarmonicExt& u);
// conjugate of a generic field harmonic on the unit disk, checked by a discrete Laplacian
HarmonicExt harmonic_conjugate(const ScalarField& u, int n = 512);

struct TraceOptions {
  double r0 = 0;  // 0 means 0.05 * local scale
  int levels = 6;
  double tol = 1e-3;
};
enum class TraceSide { Both, Interior, Exterior };
// Disk-average trace at the given points; interior side = left of the tangent.
BoundaryFunction trace(const std::function<double(cd)>& field, const std::vector<cd>& points,
                       const std::vector<cd>& tangents, TraceSide side, double local_scale, const TraceOptions& opt = {});
BoundaryFunction trace(const ScalarField& field, const JordanCurve& curve, TraceSide side, const TraceOptions& opt = {});

struct Decomposition {
  SideField zero_trace;  // field minus harmonic part
  HarmonicExt harmonic;
  double energy_total = 0, energy_zero = 0, energy_harmonic = 0;
};
Decomposition decompose(const SideField& u, int n = 1024, const QuadOptions& q = {});

// D(u) + (2/pi) * k * int u over the unit circle, k = +1 on D, -1 on D*
double curvature_action(const SideField& u, const QuadOptions& q = {});

}  // namespace weldlab
