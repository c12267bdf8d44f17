#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "vortex/reduction.hpp"

namespace vortex::equilibria {

enum class Kind { Equilibrium, Singularity };

struct CriticalPoint {
  std::array<double, 3> coords{0.0, 0.0, 0.0};  // X, Y, Z
  double Theta = 0.0;
  reduction::Geometry geometry = reduction::Geometry::Hyperboloid;
  Kind kind = Kind::Equilibrium;
  std::string label;
  // Colliding pair for singularities ("12", "23", "13").
  std::string pair;
  // Set exactly at the saddle-node value Gamma = sqrt(3)/2.
  bool degenerate = false;
  std::optional<std::array<std::complex<double>, 3>> eigenvalues;
  // "saddle", "center" or "degenerate"; empty for singularities.
  std::string type;

  reduction::NambuState state() const { return {coords[0], coords[1], coords[2], Theta, geometry}; }
};

// Five equilibria (three collinear saddles, two poles) and three singular
// points on the sphere of radius Theta.
std::vector<CriticalPoint> equilibria_111(double Theta);
// Theta < 0: E_tri+, E_tri-, S_11. Theta > 0: E_-1. Theta = 0: empty.
std::vector<CriticalPoint> equilibria_11m1(double Theta);
// Circulations (1, Gamma, -1); throws GammaOne at Gamma = 1.
std::vector<CriticalPoint> equilibria_gamma(double Gamma, double Theta);

struct Linearization {
  std::array<std::array<double, 3>, 3> J{};
  std::array<std::complex<double>, 3> eigenvalues{};  // near-zero root first
};

// Analytic Jacobian of the Nambu field; throws NotAnEquilibrium when the
// field does not vanish at the state.
Linearization jacobian(const reduction::ReducedSystemSpec& spec, const reduction::NambuState& s);
Linearization jacobian(const reduction::ReducedSystemSpec& spec, const CriticalPoint& p);

// Reduced energy (specialized normalization) of the saddle governing the
// separatrix; nullopt when no saddle exists.
std::optional<double> separatrix_energy(double Gamma, double Theta);

// Closed form for the upper critical offset; nullopt for Gamma < sqrt(3)/2.
std::optional<double> rho_plus_closed(double Gamma);

struct CriticalRho {
  double rho_minus = -1.0;
  std::optional<double> rho_plus;
  // Roots of asymptotic energy = separatrix energy found by bisection.
  std::optional<double> rho_minus_bisection, rho_plus_bisection;
};
CriticalRho critical_rho(double Gamma);

struct BranchSample {
  double Gamma = 0.0;
  std::string label;
  Kind kind = Kind::Equilibrium;
  double X = 0.0;  // NaN where the branch formula is undefined
  bool exists = false;
  bool degenerate = false;
};
// Every branch of the (1, Gamma, -1) family on an evenly spaced Gamma grid.
std::vector<BranchSample> bifurcation_sweep(double Theta, double gamma_min, double gamma_max, int steps);

}  // namespace vortex::equilibria
