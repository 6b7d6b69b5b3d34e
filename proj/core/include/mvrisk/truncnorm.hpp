#pragma once

#include "mvrisk/rng.hpp"

namespace mvrisk {

// One draw from N(mean, sd^2) truncated to (lower, upper); bounds may be
// +-infinity. Inverse-CDF between the CDF bounds in the central region,
// translated-exponential rejection (Robert 1995) for one-sided regions past
// 4 sd, uniform-proposal rejection for narrow far-tail slices. Every path
// terminates; the draw always lands inside the open interval.
// Throws std::invalid_argument unless lower < upper and sd > 0.
double sample_truncated_normal(double mean, double sd, double lower, double upper,
                               RngStream& rng);

}  // namespace mvrisk
