#pragma once

#include <vector>

#include "weldlab/conformal.hpp"
#include "weldlab/geometry.hpp"

namespace weldlab {

struct LoewnerEnergy {
  double value = 0;
  double raw = 0;        // before clamping
  bool clamped = false;  // raw was slightly negative and reported as 0
};

// Negative values above -kEnergyClampTol are reported as 0; anything lower is an error.
constexpr double kEnergyClampTol = 1e-6;

LoewnerEnergy loop_energy(const ConformalPair& pair);
LoewnerEnergy loop_energy(const JordanCurve& curve, const MapOptions& opt = {});
LoewnerEnergy line_energy(const ConformalPair& pair);
LoewnerEnergy line_energy(const JordanCurve& curve, const MapOptions& opt = {});
// dispatches on the curve kind
LoewnerEnergy curve_energy(const JordanCurve& curve, const MapOptions& opt = {});

// Piecewise-linear driving function on strictly increasing nodes starting at 0.
struct DrivingFunction {
  std::vector<double> t, lambda;

  double horizon() const { return t.empty() ? 0 : t.back(); }
  double operator()(double s) const;
  void validate() const;  // throws ConfigError
};

// (1/2) sum (d lambda)^2 / dt
double driving_energy(const DrivingFunction& d);

// Discrete chordal trace: points[k] is the tip at capacity time times[k].
struct Chord {
  std::vector<double> times;
  std::vector<cd> points;
  cd tip() const { return points.back(); }
};

// Composition of vertical-slit maps on a uniform capacity grid (lambda sampled at step midpoints).
Chord drive_to_trace(const DrivingFunction& d, int steps_per_unit = 2000);
// Sequential map-out of chord increments; points ordered from the base point on R.
DrivingFunction trace_to_drive(const std::vector<cd>& points);

struct Equipotential {
  double param = 0;  // r (disk) or y (half-plane)
  JordanCurve curve;
  LoewnerEnergy energy;
};
// f(r T) for disk pairs, f(R + i y) for half-plane pairs; evaluated in parallel
std::vector<Equipotential> equipotentials(const ConformalPair& pair, const std::vector<double>& params,
                                          const MapOptions& opt = {});

}  // namespace weldlab
