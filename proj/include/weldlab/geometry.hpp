#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace weldlab {

using cd = std::complex<double>;
constexpr double kPi = 3.14159265358979323846;
constexpr double kEscapeRadius = 50.0;

// Thrown for numerical failures (exit code 1 in the CLI).
struct ComputationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Thrown for malformed input or configuration (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Mobius {
  cd a{1}, b{0}, c{0}, d{1};

  cd operator()(cd z) const;
  cd deriv(cd z) const;
  cd det() const { return a * d - b * c; }
  Mobius inverse() const;
  Mobius compose(const Mobius& inner) const;  // this ∘ inner
  // finite preimage of infinity; only meaningful when c != 0
  cd pole() const { return -d / c; }
  bool affine() const { return c == cd(0); }

  static Mobius identity() { return {}; }
  static Mobius cayley();  // upper half-plane onto the disk, infinity -> 1
  static Mobius from_points(cd z1, cd z2, cd z3, cd w1, cd w2, cd w3);
};

enum class CurveKind { BoundedLoop, ThroughInfinity };

// Closed-form parametrizations. Loops use t in [0, 2pi), curves through
// infinity use t in R with straight continuation beyond the sampled window.
struct JordanCurve {
  CurveKind kind = CurveKind::BoundedLoop;
  std::string tag;  // circle, ellipse, fourier_loop, graph, samples, mobius, flowline, ...
  std::function<cd(double)> eval;
  std::vector<double> params;
  std::vector<cd> points;
  std::vector<double> arclength;
  std::map<std::string, double> meta;

  bool is_loop() const { return kind == CurveKind::BoundedLoop; }
  size_t size() const { return points.size(); }
  double diameter() const;
  // tangent direction from the closed form (unit complex), central difference in t
  cd tangent(double t) const;
};

struct BumpSpec {
  double a = 0, center = 0, sigma = 1;
};

struct CurveSpec {
  std::string kind;
  int samples_n = 512;
  // circle / ellipse
  cd center{0};
  double radius = 1, a = 1, b = 1;
  // fourier_loop: coefficient of e^{ikt} for k = lo..lo+coef.size()-1
  int coef_lo = -1;
  std::vector<cd> coef;
  // graph
  std::vector<BumpSpec> bumps;
  double window = 0;  // 0 means escape radius
  // samples
  std::vector<cd> samples;
  bool samples_closed = true;
};

JordanCurve build_curve(const CurveSpec& spec);
JordanCurve make_curve(CurveKind kind, std::string tag, std::function<cd(double)> eval,
                       std::vector<double> params);
// Sample node helpers
std::vector<double> loop_nodes(int n);
std::vector<double> line_nodes(int n, double window);

// curve parameter of the sample nearest to a point on the curve, refined on the closed form
double param_of_point(const JordanCurve& curve, cd point);

JordanCurve apply_mobius(const JordanCurve& curve, const Mobius& m, int samples_n = 0);

enum class Carrier { Line, Circle, Curve };

struct BoundaryFunction {
  Carrier carrier = Carrier::Line;
  std::vector<double> nodes;   // parameter values (x, angle, or curve parameter)
  std::vector<double> values;
  std::vector<double> arclength;  // for curve carriers
  std::vector<bool> valid;        // per-node convergence flag (traces)
  std::function<double(double)> eval;  // optional exact evaluator

  double at(double x) const;  // eval if present, else linear interpolation
};

// Continuous arg of the unit tangent against arclength.
BoundaryFunction winding(const JordanCurve& curve);

struct IdentityReport {
  std::string label;
  double lhs = 0;
  std::vector<std::pair<std::string, double>> rhs;
  double residual = 0;
  double relative = 0;
  std::map<std::string, double> metadata;
  std::map<std::string, std::string> notes;

  void finalize();  // recompute residual and relative residual from lhs/rhs
  double rhs_sum() const;
};

bool polyline_simple(const std::vector<cd>& pts, bool closed, double tol);

}  // namespace weldlab
