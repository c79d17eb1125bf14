#pragma once

#include <vector>

namespace maxident {

// Least-squares projection of y onto nondecreasing sequences
// (pool-adjacent-violators, unit weights), in place.
void isotonic_increasing(std::vector<double>& y);

// Projection onto {nondecreasing} intersected with [lo, hi]^n. Clipping
// after PAV is the exact projection because the box bounds are themselves
// order-consistent.
void isotonic_increasing_clamped(std::vector<double>& y, double lo, double hi);

}  // namespace maxident
