#include "zipper.hpp"

#include <cmath>

namespace weldlab::detail {

namespace {

// square root in the closed upper half-plane
cd upper_sqrt(cd u) {
  cd r = std::sqrt(u);
  return r.imag() < 0 ? -r : r;
}

std::vector<double> unwrap_increasing(const std::vector<cd>& w, const char* side) {
  std::vector<double> a(w.size());
  for (size_t k = 0; k < w.size(); ++k) {
    double x = std::arg(w[k]);
    if (k == 0) {
      a[k] = 0;
      continue;
    }
    double step = x - std::fmod(a[k - 1], 2 * kPi);
    step = std::fmod(step + 4 * kPi, 2 * kPi);
    if (!(step > 0)) throw ComputationError(std::string("zipper lost monotonicity on the ") + side + " side");
    a[k] = a[k - 1] + step;
  }
  if (!(a.back() < 2 * kPi)) throw ComputationError(std::string("zipper correspondence wraps more than once on the ") + side + " side");
  return a;
}

}  // namespace

ZipperCorrespondence zipper_correspondence(const std::function<cd(double)>& loop, int n) {
  if (n < 8) throw ComputationError("zipper needs at least 8 vertices");
  ZipperCorrespondence out;
  std::vector<cd> z(n);
  out.param.resize(n);
  for (int k = 0; k < n; ++k) {
    out.param[k] = 2 * kPi * k / n;
    z[k] = loop(out.param[k]);
  }
  // Vertex 0 goes to infinity and vertex 1 to 0; the rest of the loop becomes a curve in H.
  auto open = [&](cd x) { return cd(0, 1) * std::sqrt((x - z[1]) / (x - z[0])); };
  std::vector<cd> w(n);
  for (int k = 2; k < n; ++k) w[k] = open(z[k]);
  cd origin = open(0.0);  // interior point
  cd far = cd(0, 1);      // image of infinity
  bool zeta_infinite = true;
  double zeta = 0;        // image of vertex 0

  // Each zipped vertex has one real copy per side; the interior lies left of the curve,
  // so its copies start on the negative side.
  std::vector<double> in(n, 0.0), outside(n, 0.0);
  for (int k = 2; k < n; ++k) {
    cd a = w[k];
    if (!(a.imag() > 0)) throw ComputationError("zipper vertex left the upper half-plane");
    double b_inv = a.real() / std::norm(a);
    double t = std::norm(a) / a.imag();
    double t2 = t * t;
    auto mob = [b_inv](cd x) { return x / (1.0 - x * b_inv); };
    auto on_line = [&](double x) {
      double m = x / (1 - x * b_inv);
      return std::copysign(std::sqrt(m * m + t2), m);
    };
    auto in_plane = [&](cd x) {
      cd m = mob(x);
      return upper_sqrt(m * m + t2);
    };
    for (int j = 1; j < k - 1; ++j) {
      in[j] = on_line(in[j]);
      outside[j] = on_line(outside[j]);
    }
    in[k - 1] = -t;
    outside[k - 1] = t;
    for (int j = k + 1; j < n; ++j) w[j] = in_plane(w[j]);
    origin = in_plane(origin);
    far = in_plane(far);
    if (zeta_infinite) {
      if (b_inv != 0) {
        double m = -1 / b_inv;
        zeta = std::copysign(std::sqrt(m * m + t2), m);
        zeta_infinite = false;
      }
    } else {
      zeta = on_line(zeta);
    }
    w[k] = 0;
  }
  // Fold the last arc (vertex n-1 at 0 to vertex 0 at zeta) onto the negative axis.
  auto fold_real = [&](double x) {
    double m = zeta_infinite ? x : x / (1 - x / zeta);
    return m * m;
  };
  auto fold = [&](cd x) {
    cd m = zeta_infinite ? x : x / (1.0 - x / zeta);
    return m * m;
  };
  in[n - 1] = outside[n - 1] = 0;
  cd q = fold(origin), r = fold(far);
  if (!(q.imag() < 0) || !(r.imag() > 0)) throw ComputationError("zipper sent the reference points to the wrong side");
  // interior: lower half-plane onto the disk with q -> 0; exterior: upper half-plane onto the
  // exterior disk with r -> infinity; vertex 0 sits at infinity on both sides
  std::vector<cd> win(n), wout(n);
  win[0] = wout[0] = 1;
  for (int k = 1; k < n; ++k) {
    double xi = fold_real(in[k]), xo = fold_real(outside[k]);
    win[k] = (xi - q) / (xi - std::conj(q));
    wout[k] = (xo - std::conj(r)) / (xo - r);
  }
  out.angle_in = unwrap_increasing(win, "interior");
  out.angle_out = unwrap_increasing(wout, "exterior");
  return out;
}

}  // namespace weldlab::detail
