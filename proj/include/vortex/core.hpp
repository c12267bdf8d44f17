#pragma once

#include <array>
#include <optional>
#include <vector>

namespace vortex {

using Vec2 = std::array<double, 2>;

inline constexpr double kCoincidenceFloor = 1e-12;

struct VortexState {
  std::vector<Vec2> positions;
  std::vector<double> circulations;

  std::size_t size() const { return positions.size(); }
  // Flat (x1, y1, x2, y2, ...) layout used by the integrator.
  std::vector<double> flat() const;
  static VortexState from_flat(const double* xy, const std::vector<double>& circulations);
  // Throws InvalidArgument when lengths disagree or N < 2.
  void validate() const;
};

struct ConservedSet {
  double H = 0.0;
  Vec2 M{0.0, 0.0};
  double Theta = 0.0;
  std::optional<Vec2> r0;
};

namespace core {

// Velocities of all vortices; throws CoincidentVortices when two vortices are
// closer than `floor`.
std::vector<Vec2> rhs(const VortexState& s, double floor = kCoincidenceFloor);

// Flat variant for the integrator: xy and out have length 2N.
void rhs_flat(const double* circulations, std::size_t n, const double* xy, double* out,
              double floor = kCoincidenceFloor);

double hamiltonian(const VortexState& s, double floor = kCoincidenceFloor);
double hamiltonian_flat(const double* circulations, std::size_t n, const double* xy,
                        double floor = kCoincidenceFloor);

// dH/dr_i, laid out like positions.
std::vector<Vec2> hamiltonian_gradient(const VortexState& s, double floor = kCoincidenceFloor);

ConservedSet conserved(const VortexState& s);

double min_pair_distance(const VortexState& s);

}  // namespace core
}  // namespace vortex
