#include "vortex/grobli.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vortex/errors.hpp"

namespace vortex::grobli {

namespace {

constexpr double kRadicandFloor = 1e-14;

double sq_dist(const Vec2& a, const Vec2& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1];
  return dx * dx + dy * dy;
}

}  // namespace

TriangleState from_state(const VortexState& s) {
  if (s.size() != 3) raise(ErrorCode::InvalidArgument, "triangle needs three vortices");
  const auto& r = s.positions;
  TriangleState ts;
  ts.l23sq = sq_dist(r[1], r[2]);
  ts.l31sq = sq_dist(r[2], r[0]);
  ts.l12sq = sq_dist(r[0], r[1]);
  const double cross = (r[1][0] - r[0][0]) * (r[2][1] - r[0][1]) - (r[1][1] - r[0][1]) * (r[2][0] - r[0][0]);
  ts.sigma = cross > 0.0 ? -1 : 1;
  return ts;
}

double heron_area(const TriangleState& ts) {
  const double a = ts.l12sq, b = ts.l23sq, c = ts.l31sq;
  const double rad = 2.0 * a * b + 2.0 * b * c + 2.0 * c * a - a * a - b * b - c * c;
  const double scale = std::max({a * a, b * b, c * c, 1.0});
  if (rad < -kRadicandFloor * scale)
    raise(ErrorCode::InvalidTriangle, "Heron radicand " + std::to_string(rad));
  return rad <= 0.0 ? 0.0 : 0.25 * std::sqrt(rad);
}

std::array<double, 3> grobli_rhs(const TriangleState& ts, const std::array<double, 3>& g) {
  if (!(ts.l12sq > 0.0) || !(ts.l23sq > 0.0) || !(ts.l31sq > 0.0))
    raise(ErrorCode::ZeroSide, "triangle has a vanishing side");
  const double f = 4.0 * ts.sigma * heron_area(ts);
  const double i12 = 1.0 / ts.l12sq, i23 = 1.0 / ts.l23sq, i31 = 1.0 / ts.l31sq;
  return {f * g[0] * (i12 - i31), f * g[1] * (i23 - i12), f * g[2] * (i31 - i23)};
}

double grobli_invariant(const TriangleState& ts, const std::array<double, 3>& g) {
  const double p = g[0] * g[1] * g[2];
  if (p == 0.0) raise(ErrorCode::ZeroCirculationProduct, "product of circulations vanishes");
  return (g[0] * g[1] * ts.l12sq + g[1] * g[2] * ts.l23sq + g[2] * g[0] * ts.l31sq) / (3.0 * p);
}

TrilinearPoint trilinear(const TriangleState& ts, const std::array<double, 3>& g, double L) {
  const double scale = (L == 0.0) ? 1.0 : L;
  if (g[0] * scale == 0.0 || g[1] * scale == 0.0 || g[2] * scale == 0.0)
    raise(ErrorCode::ZeroDenominator, "zero circulation in trilinear denominator");
  return {ts.l23sq / (g[0] * scale), ts.l31sq / (g[1] * scale), ts.l12sq / (g[2] * scale)};
}

}  // namespace vortex::grobli
