#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vortex/core.hpp"
#include "vortex/errors.hpp"
#include "vortex/integrate.hpp"

namespace vortex::scattering {

struct Setup {
  double rho = 0.0;
  double Gamma = 1.0;
  double L = 100.0;
  double d = 1.0;

  double Theta() const { return Gamma * d * (d + 2.0 * rho); }
};

enum class Outcome { Direct, Exchange, ExtendedDirect };
const char* outcome_name(Outcome o);

struct RunOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  integrate::Method method = integrate::Method::Dopri5;
  // Time budget; past it the run either throws NoEscape or returns with
  // escaped = false.
  double t_max = 1e5;
  bool throw_on_no_escape = true;
  // Escape thresholds.
  double partner_tol = 0.01;
  double far_factor = 50.0;
  double heading_tol = 1e-4;
  double probe_interval = 1.0;  // in units of d
  // Keep integrating until the third vortex is at least as far from the
  // dipole as at launch.
  bool symmetric_exit = true;
  // Heading samples per accepted step for the unwrapping.
  int substeps = 4;
  bool keep_trajectory = false;
};

struct Result {
  double delta_alpha = 0.0;              // lab frame, unwrapped
  std::optional<double> delta_alpha_reduced;  // Gamma = 1 only
  Outcome outcome = Outcome::Direct;
  int initial_partner = 1;
  int final_partner = 1;
  double d13 = 0.0, d23 = 0.0;  // final partner distances
  double min_distance = 0.0;
  int x_crossings = 0, y_crossings = 0;
  double max_X = 0.0, min_X = 0.0;
  double t_final = 0.0;
  bool escaped = true;
  double drift_H = 0.0, drift_M = 0.0, drift_Theta = 0.0, casimir = 0.0;
  std::size_t steps = 0;
  integrate::Trajectory trajectory;  // filled with keep_trajectory
};

// Launch positions for circulations (1, Gamma, -1); throws BadSetup.
VortexState initial_state(const Setup& s);

// Limit of the reduced (1, Gamma, -1) energy along the setup family as L
// grows; equals log 2 at Gamma = 1.
double asymptotic_reduced_energy(double Gamma, double d = 1.0);

Result run(const Setup& s, const RunOptions& opts = {});
// Same pipeline from an arbitrary (1, Gamma, -1) state. The incoming partner
// of vortex 3 is the nearer of vortices 1 and 2; launch_distance is the
// distance the third vortex must regain before exit (0 disables).
Result run_state(const VortexState& s0, double d, double launch_distance, const RunOptions& opts = {});

struct SweepRow {
  double rho = 0.0;
  double Theta = 0.0;
  double delta_alpha = 0.0;
  std::optional<double> delta_alpha_reduced;
  std::optional<Outcome> outcome;
  bool near_separatrix = false;
  std::string error;  // error name when the run failed
  Result result;
};

std::vector<double> rho_grid(double start, double stop, double step);

// Rows come back in the order of rhos whatever the scheduling.
std::vector<SweepRow> sweep(const std::vector<double>& rhos, double Gamma, const Setup& base = {},
                            const RunOptions& opts = {}, int jobs = 1);

struct Discontinuity {
  double rho_left = 0.0, rho_right = 0.0;
  double jump = 0.0;  // NaN across failed or flagged rows
  bool divergence = false;
  bool two_pi = false;
};

// Steps with |jump| > pi, flips into or out of Exchange, and failed or flagged rows break the
// curve; breaks closer than window/2 points merge. A break is a divergence
// when the curve is monotone with growing increments over the `window` points
// on each side; otherwise a jump.
std::vector<Discontinuity> analyze(const std::vector<SweepRow>& rows, int window = 5);

}  // namespace vortex::scattering
