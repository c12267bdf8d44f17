#pragma once

#include <array>
#include <string>
#include <vector>

#include "vortex/core.hpp"
#include "vortex/integrate.hpp"

namespace vortex::reduction {

struct JacobiFrame {
  Vec2 R1{0.0, 0.0}, R2{0.0, 0.0}, R3{0.0, 0.0};
  double kappa1 = 0.0, kappa2 = 0.0, kappa3 = 0.0;
};

enum class Geometry { Sphere, Hyperboloid };

struct NambuState {
  double X = 0.0, Y = 0.0, Z = 0.0;
  double Theta = 0.0;
  Geometry geometry = Geometry::Sphere;
};

enum class Selector { GeneralPositive, GeneralNegative, Specialized111, Specialized11m1, SpecializedGamma };
const char* selector_name(Selector s);

// One Hamiltonian of the reduced system written as sum_k c_k log(arg_k) with
// every arg_k affine in (X, Z) at fixed Theta.
struct ReducedSystemSpec {
  std::array<double, 3> gammas{1.0, 1.0, 1.0};
  double kappa1 = 0.0, kappa2 = 0.0, kappa3 = 0.0;
  double coupling = 0.0;  // k for the sphere, l for the hyperboloid
  Selector selector = Selector::GeneralPositive;
  // Lab energy = selected Hamiltonian + offset.
  double offset = 0.0;

  Geometry geometry() const { return kappa2 > 0.0 ? Geometry::Sphere : Geometry::Hyperboloid; }

  // General form for any admissible triple (G1, G2 > 0, partial sums nonzero).
  static ReducedSystemSpec general(const std::array<double, 3>& g);
  static ReducedSystemSpec identical();  // (1, 1, 1)
  static ReducedSystemSpec dipole();     // (1, 1, -1)
  // (1, G, -1); G = 1 returns dipole().
  static ReducedSystemSpec gamma_family(double Gamma);
};

struct LogTerm {
  double coeff;
  // arg = cX * X + cZ * Z + c0, with c0 carrying the Theta dependence.
  double cX, cZ, c0;
  std::string pair;  // which vortex pair coincides when arg -> 0
};

std::vector<LogTerm> log_terms(const ReducedSystemSpec& spec, double Theta);

JacobiFrame to_jacobi(const VortexState& s);
VortexState from_jacobi(const JacobiFrame& f, const std::array<double, 3>& g);
NambuState to_nambu(const JacobiFrame& f);
NambuState reduce(const VortexState& s);
// One lab configuration (center of vorticity at the origin, R1 on the
// positive x axis) with the given Nambu coordinates.
VortexState lift(const NambuState& s, const std::array<double, 3>& g);

double reduced_hamiltonian(const ReducedSystemSpec& spec, const NambuState& s);
std::array<double, 3> hamiltonian_gradient(const ReducedSystemSpec& spec, const NambuState& s);

// grad C x grad H with the sign structure of the state's geometry.
std::array<double, 3> nambu_rhs(const ReducedSystemSpec& spec, const NambuState& s);
// Hand-simplified vector fields for (1,1,-1) and (1,G,-1); other selectors
// fall back to nambu_rhs.
std::array<double, 3> nambu_rhs_closed(const ReducedSystemSpec& spec, const NambuState& s);

// Theta^2 minus the quadric of the geometry.
double casimir_residual(const NambuState& s);
// Z from (X, Y, Theta) on the invariant surface (upper sheet on the hyperboloid).
double surface_z(double X, double Y, double Theta, Geometry g, bool upper = true);

// Heading rate of vortex 3 and the angle rate theta2 for (1, 1, -1).
double alpha_rate(const NambuState& s);
double theta2_rate(const NambuState& s);

struct Relabeling {
  std::array<int, 3> order{0, 1, 2};  // new index k takes old vortex order[k]
  bool time_reversed = false;
  std::array<double, 3> gammas{};
};
// Permutes circulations so that G1 >= G2 > 0 and negates them (reversing
// time) when two are negative.
Relabeling canonical_order(const std::array<double, 3>& g);

std::vector<NambuState> map_trajectory(const integrate::Trajectory& traj, const std::array<double, 3>& g);

// State vector (X, Y, Z) or (X, Y, Z, alpha) when with_alpha is set.
integrate::Rhs reduced_field(const ReducedSystemSpec& spec, double Theta, bool with_alpha = false,
                             bool closed_form = false);
integrate::Trajectory integrate_reduced(const ReducedSystemSpec& spec, const NambuState& s0,
                                        integrate::Options opts, bool with_alpha = false,
                                        bool closed_form = false);

}  // namespace vortex::reduction
