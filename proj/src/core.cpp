#include "vortex/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vortex/errors.hpp"

namespace vortex {

std::vector<double> VortexState::flat() const {
  std::vector<double> xy(2 * positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    xy[2 * i] = positions[i][0];
    xy[2 * i + 1] = positions[i][1];
  }
  return xy;
}

VortexState VortexState::from_flat(const double* xy, const std::vector<double>& circulations) {
  VortexState s;
  s.circulations = circulations;
  s.positions.resize(circulations.size());
  for (std::size_t i = 0; i < circulations.size(); ++i) s.positions[i] = {xy[2 * i], xy[2 * i + 1]};
  return s;
}

void VortexState::validate() const {
  if (positions.size() != circulations.size())
    raise(ErrorCode::InvalidArgument, "positions and circulations differ in length");
  if (positions.size() < 2) raise(ErrorCode::InvalidArgument, "need at least two vortices");
}

namespace core {

namespace {

void coincident(std::size_t i, std::size_t j, double r) {
  raise(ErrorCode::CoincidentVortices, "vortices " + std::to_string(i + 1) + " and " +
                                           std::to_string(j + 1) + " at distance " +
                                           std::to_string(r));
}

}  // namespace

void rhs_flat(const double* g, std::size_t n, const double* xy, double* out, double floor) {
  for (std::size_t i = 0; i < 2 * n; ++i) out[i] = 0.0;
  const double floor2 = floor * floor;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xy[2 * i] - xy[2 * j];
      const double dy = xy[2 * i + 1] - xy[2 * j + 1];
      const double r2 = dx * dx + dy * dy;
      if (!(r2 > floor2)) coincident(i, j, std::sqrt(r2));
      const double ux = dx / r2, uy = dy / r2;
      out[2 * i] -= g[j] * uy;
      out[2 * i + 1] += g[j] * ux;
      out[2 * j] += g[i] * uy;
      out[2 * j + 1] -= g[i] * ux;
    }
  }
}

std::vector<Vec2> rhs(const VortexState& s, double floor) {
  s.validate();
  const auto xy = s.flat();
  std::vector<double> v(xy.size());
  rhs_flat(s.circulations.data(), s.size(), xy.data(), v.data(), floor);
  std::vector<Vec2> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = {v[2 * i], v[2 * i + 1]};
  return out;
}

double hamiltonian_flat(const double* g, std::size_t n, const double* xy, double floor) {
  const double floor2 = floor * floor;
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = xy[2 * i] - xy[2 * j];
      const double dy = xy[2 * i + 1] - xy[2 * j + 1];
      const double r2 = dx * dx + dy * dy;
      if (!(r2 > floor2)) coincident(i, j, std::sqrt(r2));
      h -= 0.5 * g[i] * g[j] * std::log(r2);
    }
  }
  return h;
}

double hamiltonian(const VortexState& s, double floor) {
  s.validate();
  const auto xy = s.flat();
  return hamiltonian_flat(s.circulations.data(), s.size(), xy.data(), floor);
}

std::vector<Vec2> hamiltonian_gradient(const VortexState& s, double floor) {
  s.validate();
  const auto& g = s.circulations;
  std::vector<Vec2> grad(s.size(), Vec2{0.0, 0.0});
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double dx = s.positions[i][0] - s.positions[j][0];
      const double dy = s.positions[i][1] - s.positions[j][1];
      const double r2 = dx * dx + dy * dy;
      if (!(r2 > floor * floor)) coincident(i, j, std::sqrt(r2));
      const double c = g[i] * g[j] / r2;
      grad[i][0] -= c * dx;
      grad[i][1] -= c * dy;
      grad[j][0] += c * dx;
      grad[j][1] += c * dy;
    }
  }
  return grad;
}

ConservedSet conserved(const VortexState& s) {
  s.validate();
  ConservedSet c;
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = s.circulations[i];
    const auto& r = s.positions[i];
    c.M[0] += g * r[0];
    c.M[1] += g * r[1];
    c.Theta += g * (r[0] * r[0] + r[1] * r[1]);
    total += g;
  }
  if (total != 0.0) c.r0 = Vec2{c.M[0] / total, c.M[1] / total};
  if (min_pair_distance(s) > kCoincidenceFloor) c.H = hamiltonian(s);
  else c.H = std::numeric_limits<double>::infinity();
  return c;
}

double min_pair_distance(const VortexState& s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      best = std::min(best, std::hypot(s.positions[i][0] - s.positions[j][0],
                                       s.positions[i][1] - s.positions[j][1]));
  return best;
}

}  // namespace core
}  // namespace vortex
