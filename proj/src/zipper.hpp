#pragma once

#include <functional>
#include <vector>

#include "weldlab/geometry.hpp"

namespace weldlab::detail {

// Boundary correspondence of a loop around 0 by the geodesic zipper through n equispaced
// parameter samples. angle_in[k] is the angle on the unit circle of the interior map fixing
// 0 that hits loop(param[k]); angle_out[k] the same for the exterior map fixing infinity.
// Both are unwrapped and increasing, starting at 0 for param 0.
struct ZipperCorrespondence {
  std::vector<double> param, angle_in, angle_out;
};
ZipperCorrespondence zipper_correspondence(const std::function<cd(double)>& loop, int n);

}  // namespace weldlab::detail
