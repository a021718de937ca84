#pragma once

#include <vector>

#include "weldlab/geometry.hpp"

namespace weldlab {

// In-place DFT. sign = -1 is the forward transform (no scaling).
void fft(std::vector<cd>& data, int sign);

// Fourier coefficients of periodic samples on equispaced nodes 2pi k/n, in FFT order, scaled by 1/n.
std::vector<cd> fourier(const std::vector<cd>& samples);
std::vector<cd> fourier(const std::vector<double>& samples);
inline int freq(int k, int n) { return k <= n / 2 ? k : k - n; }

// Truncated Laurent series sum_j c[j] z^(lo + j).
struct Laurent {
  int lo = 0;
  std::vector<cd> c;

  int hi() const { return lo + (int)c.size() - 1; }
  cd coef(int p) const { return (p < lo || p > hi()) ? cd(0) : c[p - lo]; }
  cd operator()(cd z) const;
  Laurent deriv() const;
  // values at r e^{2 pi i k / n}, exact for the truncated series
  std::vector<cd> ring(double r, int n) const;
  // keeps powers lo..hi of the interpolating trigonometric polynomial
  static Laurent from_boundary(const std::vector<cd>& samples, int lo, int hi);
  // largest coefficient magnitude outside [lo, hi], relative to the largest kept one
  static double leakage(const std::vector<cd>& samples, int lo, int hi);
};

// wa * a + wb * b over the union of the power ranges
Laurent combine(const Laurent& a, double wa, const Laurent& b, double wb);

// log of a zero-free analytic function on the disk (exterior = false, powers >= 0) or on the
// exterior disk including infinity (exterior = true, powers <= 0), given boundary samples.
// The imaginary constant is chosen so that Im log at w = 1 lies in (-pi, pi].
Laurent log_series(const std::vector<cd>& boundary, bool exterior);

// Dirichlet energy (1/pi) int |grad Re L|^2 of the real part of an analytic series on its disk
// (powers >= 0) or exterior disk (powers <= 0): sum |p| |c_p|^2.
double series_energy(const Laurent& s);

// Spectral tools for real periodic samples.
double h12_spectral(const std::vector<double>& samples);
std::vector<double> periodic_conjugate(const std::vector<double>& samples);
std::vector<double> periodic_derivative(const std::vector<double>& samples);
// analytic function on the disk whose real part has the given boundary values; imaginary part vanishes at 0
Laurent harmonic_series(const std::vector<double>& samples);
// trigonometric interpolant evaluated at an arbitrary angle
double trig_eval(const std::vector<cd>& coeffs, double theta);

}  // namespace weldlab
