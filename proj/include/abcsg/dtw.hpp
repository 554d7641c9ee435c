#pragma once

#include "abcsg/sax.hpp"

namespace abcsg {

// Unconstrained dynamic time warping with squared local cost
// d(i, j) = (s_i - r_j)^2. Returns the accumulated cost DTW(n, m) without a
// final square root. Series may differ in length.
double dtw_distance(const TimeSeries& s, const TimeSeries& r);

}  // namespace abcsg
