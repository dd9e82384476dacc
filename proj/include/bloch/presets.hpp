#pragma once

#include <string>
#include <vector>

#include "bloch/coeffs.hpp"

namespace bloch {

// free-1d: c = 1. cos-1d: c = 2 + cos 2 pi x. mathieu: -d^2 + 2 cos 2 pi x.
// checkerboard-2d: c_ij = delta_ij (2 + cos 2 pi x_1)(2 + cos 2 pi x_2).
// constant-v-1d: -d^2 + 5.
std::vector<std::string> preset_names();
OperatorSpec preset(const std::string& name);

}  // namespace bloch
