#include "weldlab/field.hpp"

#include <algorithm>
#include <cmath>

namespace weldlab {

ScalarField constant_field(double c) {
  ScalarField f;
  f.kind = "constant";
  f.value = [c](cd) { return c; };
  f.grad = [](cd) { return cd(0); };
  f.c_inf = c;
  return f;
}

ScalarField gaussian_bumps(const std::vector<Bump2D>& bumps, double c_inf) {
  ScalarField f;
  f.kind = "gaussian_bumps";
  f.bumps = bumps;
  f.c_inf = c_inf;
  f.value = [bumps, c_inf](cd z) {
    double v = c_inf;
    for (const auto& b : bumps) v += b.a * std::exp(-std::norm(z - b.center) / (2 * b.sigma * b.sigma));
    return v;
  };
  f.grad = [bumps](cd z) {
    cd g = 0;
    for (const auto& b : bumps) {
      double s2 = b.sigma * b.sigma;
      g += -b.a * std::exp(-std::norm(z - b.center) / (2 * s2)) * (z - b.center) / s2;
    }
    return g;
  };
  if (!bumps.empty()) {
    double lx = INFINITY, ly = INFINITY, hx = -INFINITY, hy = -INFINITY, fe = INFINITY;
    for (const auto& b : bumps) {
      // beyond 9 sigma the Gaussian is below 3e-18 of its peak
      double r = 9 * b.sigma;
      lx = std::min(lx, b.center.real() - r);
      hx = std::max(hx, b.center.real() + r);
      ly = std::min(ly, b.center.imag() - r);
      hy = std::max(hy, b.center.imag() + r);
      fe = std::min(fe, b.sigma);
    }
    f.box_lo = {lx, ly};
    f.box_hi = {hx, hy};
    f.feature = fe;
  }
  return f;
}

ScalarField grid_field(double x0, double y0, double dx, double dy, int nx, int ny, std::vector<double> values, double c_inf) {
  if (nx < 2 || ny < 2 || (int)values.size() != nx * ny || !(dx > 0) || !(dy > 0)) throw ConfigError("invalid grid field");
  ScalarField f;
  f.kind = "grid";
  f.c_inf = c_inf;
  f.box_lo = {x0, y0};
  f.box_hi = {x0 + (nx - 1) * dx, y0 + (ny - 1) * dy};
  f.feature = std::min(dx, dy);
  auto locate = [=](cd z, int& i, int& j, double& s, double& t) {
    double u = (z.real() - x0) / dx, v = (z.imag() - y0) / dy;
    if (u < 0 || v < 0 || u > nx - 1 || v > ny - 1) return false;
    i = std::min((int)u, nx - 2);
    j = std::min((int)v, ny - 2);
    s = u - i;
    t = v - j;
    return true;
  };
  f.value = [=](cd z) {
    int i, j;
    double s, t;
    if (!locate(z, i, j, s, t)) return c_inf;
    auto at = [&](int a, int b) { return values[(size_t)b * nx + a]; };
    return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, j + 1) + s * t * at(i + 1, j + 1);
  };
  f.grad = [=](cd z) {
    int i, j;
    double s, t;
    if (!locate(z, i, j, s, t)) return cd(0);
    auto at = [&](int a, int b) { return values[(size_t)b * nx + a]; };
    double gx = ((1 - t) * (at(i + 1, j) - at(i, j)) + t * (at(i + 1, j + 1) - at(i, j + 1))) / dx;
    double gy = ((1 - s) * (at(i, j + 1) - at(i, j)) + s * (at(i + 1, j + 1) - at(i + 1, j))) / dy;
    return cd(gx, gy);
  };
  return f;
}

ScalarField sum(const ScalarField& a, const ScalarField& b, double wa, double wb) {
  ScalarField f;
  f.kind = "sum";
  auto av = a.value, bv = b.value;
  auto ag = a.grad, bg = b.grad;
  f.value = [=](cd z) { return wa * av(z) + wb * bv(z); };
  f.grad = [=](cd z) { return wa * ag(z) + wb * bg(z); };
  if (a.c_inf && b.c_inf) f.c_inf = wa * *a.c_inf + wb * *b.c_inf;
  if (a.has_box() && b.has_box()) {
    f.box_lo = {std::min(a.box_lo.real(), b.box_lo.real()), std::min(a.box_lo.imag(), b.box_lo.imag())};
    f.box_hi = {std::max(a.box_hi.real(), b.box_hi.real()), std::max(a.box_hi.imag(), b.box_hi.imag())};
  } else if (a.has_box()) {
    f.box_lo = a.box_lo;
    f.box_hi = a.box_hi;
  } else {
    f.box_lo = b.box_lo;
    f.box_hi = b.box_hi;
  }
  f.feature = std::min(a.feature, b.feature);
  return f;
}

double gaussian_bumps_energy(const std::vector<Bump2D>& bumps) {
  // int grad b_i . grad b_j over R^2 in closed form
  double e = 0;
  for (const auto& p : bumps)
    for (const auto& q : bumps) {
      double A = 1 / (2 * p.sigma * p.sigma), B = 1 / (2 * q.sigma * q.sigma);
      double d2 = std::norm(p.center - q.center);
      double s = A + B, k = A * B / s;
      // integrand 4AB (z-p).(z-q) exp(-A|z-p|^2 - B|z-q|^2)
      double integral = 4 * A * B * (kPi / s) * std::exp(-k * d2) * (1 / s - k * d2 / s);
      e += p.a * q.a * integral;
    }
  return e / kPi;
}

}  // namespace weldlab
