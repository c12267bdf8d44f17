#pragma once

#include <array>

#include "vortex/core.hpp"

namespace vortex::grobli {

// Squared side lengths and orientation (+1 clockwise, -1 counterclockwise).
struct TriangleState {
  double l23sq = 0.0, l31sq = 0.0, l12sq = 0.0;
  int sigma = 1;
};

struct TrilinearPoint {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
};

// Orientation from the lab positions; collinear states get sigma = +1.
TriangleState from_state(const VortexState& s);

double heron_area(const TriangleState& ts);

// d/dt of (l23^2, l31^2, l12^2). Stops on collinear states by returning zero
// derivatives there (A = 0); the orientation cannot be continued past them.
std::array<double, 3> grobli_rhs(const TriangleState& ts, const std::array<double, 3>& g);

double grobli_invariant(const TriangleState& ts, const std::array<double, 3>& g);

// Scaled coordinates summing to 3 when L != 0; pass L = 0 for the unscaled
// variant that sums to 0.
TrilinearPoint trilinear(const TriangleState& ts, const std::array<double, 3>& g, double L);

}  // namespace vortex::grobli
