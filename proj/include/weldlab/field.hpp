#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "weldlab/geometry.hpp"

namespace weldlab {

struct Bump2D {
  double a = 0;
  cd center{0};
  double sigma = 1;
};

// Real field on the plane (or on a reference domain) with its gradient phi_x + i phi_y.
struct ScalarField {
  std::string kind = "function";
  std::function<double(cd)> value;
  std::function<cd(cd)> grad;
  std::optional<double> c_inf;  // constant value outside the support box
  cd box_lo{0}, box_hi{0};      // gradient vanishes (to rounding) outside this box
  std::vector<Bump2D> bumps;    // kept for gaussian_bumps fields
  double feature = 1;           // smallest length scale, used to size quadrature panels

  bool has_box() const { return box_hi.real() > box_lo.real() && box_hi.imag() > box_lo.imag(); }
};

struct ComplexField {
  ScalarField re, im;
};

ScalarField constant_field(double c);
ScalarField gaussian_bumps(const std::vector<Bump2D>& bumps, double c_inf = 0.0);
// bilinear interpolation on a regular grid, values[j * nx + i] at (x0 + i dx, y0 + j dy);
// outside the grid the field equals c_inf
ScalarField grid_field(double x0, double y0, double dx, double dy, int nx, int ny, std::vector<double> values, double c_inf);
ScalarField sum(const ScalarField& a, const ScalarField& b, double wa = 1, double wb = 1);

// Exact plane energy of a Gaussian bump sum, (1/pi) int |grad|^2.
double gaussian_bumps_energy(const std::vector<Bump2D>& bumps);

}  // namespace weldlab
