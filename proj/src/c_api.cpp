#include "vortex/vortex.h"

#include <cmath>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vortex/core.hpp"
#include "vortex/elliptic.hpp"
#include "vortex/equilibria.hpp"
#include "vortex/errors.hpp"
#include "vortex/integrate.hpp"
#include "vortex/reduction.hpp"
#include "vortex/scattering.hpp"

struct vx_table {
  using Cell = std::variant<double, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  explicit vx_table(std::vector<std::string> cols) : columns(std::move(cols)) {}
  std::vector<Cell>& row() { return rows.emplace_back(); }
};

namespace {

using namespace vortex;
using Row = std::vector<vx_table::Cell>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <class F>
int guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return VX_OK;
  } catch (const Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VX_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VX_E_INTERNAL, e.what());
  }
}

integrate::Options base_options(const vx_options* o) {
  integrate::Options io;
  if (o) {
    io.rtol = o->rtol;
    io.atol = o->atol;
  }
  return io;
}

std::vector<double> uniform_times(double t0, double t1, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) return {t1};
  for (std::size_t k = 0; k < n; ++k) out.push_back(t0 + (t1 - t0) * static_cast<double>(k) / (n - 1));
  return out;
}

reduction::ReducedSystemSpec spec_for(const double* g) {
  if (g[0] == 1.0 && g[1] == 1.0 && g[2] == 1.0) return reduction::ReducedSystemSpec::identical();
  if (g[0] == 1.0 && g[2] == -1.0 && g[1] > 0.0) return reduction::ReducedSystemSpec::gamma_family(g[1]);
  return reduction::ReducedSystemSpec::general({g[0], g[1], g[2]});
}

bool is_dipole(const double* g) { return g[0] == 1.0 && g[1] == 1.0 && g[2] == -1.0; }

std::vector<equilibria::CriticalPoint> critical_points(const double* g, double theta) {
  if (g[0] == 1.0 && g[1] == 1.0 && g[2] == 1.0) {
    if (theta > 0.0) return equilibria::equilibria_111(theta);
    return {};
  }
  if (is_dipole(g)) return equilibria::equilibria_11m1(theta);
  if (g[0] == 1.0 && g[2] == -1.0 && g[1] > 0.0) return equilibria::equilibria_gamma(g[1], theta);
  return {};
}

double opt(const std::optional<double>& v) { return v ? *v : kNaN; }

}  // namespace

extern "C" {

const char* vx_version(void) { return "1.0.0"; }

void vx_options_default(vx_options* o) {
  if (!o) return;
  o->rtol = 1e-10;
  o->atol = 1e-12;
  o->t_max = 1e5;
  o->jobs = 1;
  o->samples = 0;
}

const char* vx_last_error(void) { return g_last_error.c_str(); }

const char* vx_status_name(int status) {
  if (status == VX_OK) return "Ok";
  if (status == VX_E_NULL_ARGUMENT) return "NullArgument";
  if (status == VX_E_INTERNAL) return "Internal";
  if (status >= 1 && status <= static_cast<int>(ErrorCode::InvalidArgument))
    return error_name(static_cast<ErrorCode>(status));
  return "Unknown";
}

size_t vx_table_rows(const vx_table* t) { return t ? t->rows.size() : 0; }
size_t vx_table_cols(const vx_table* t) { return t ? t->columns.size() : 0; }

const char* vx_table_column(const vx_table* t, size_t col) {
  return t && col < t->columns.size() ? t->columns[col].c_str() : nullptr;
}

int vx_table_is_text(const vx_table* t, size_t row, size_t col) {
  if (!t || row >= t->rows.size() || col >= t->rows[row].size()) return 0;
  return std::holds_alternative<std::string>(t->rows[row][col]) ? 1 : 0;
}

double vx_table_number(const vx_table* t, size_t row, size_t col) {
  if (!t || row >= t->rows.size() || col >= t->rows[row].size()) return kNaN;
  const auto* v = std::get_if<double>(&t->rows[row][col]);
  return v ? *v : kNaN;
}

const char* vx_table_text(const vx_table* t, size_t row, size_t col) {
  if (!t || row >= t->rows.size() || col >= t->rows[row].size()) return nullptr;
  const auto* v = std::get_if<std::string>(&t->rows[row][col]);
  return v ? v->c_str() : nullptr;
}

void vx_table_free(vx_table* t) { delete t; }

int vx_scattering_state(double rho, double gamma, double L, double d, double* xy_out) {
  if (!xy_out) return fail(VX_E_NULL_ARGUMENT, "xy_out is null");
  return guarded([&] {
    const auto s = scattering::initial_state({rho, gamma, L, d});
    const auto f = s.flat();
    for (std::size_t k = 0; k < 6; ++k) xy_out[k] = f[k];
  });
}

int vx_simulate(const double* gammas, const double* xy, size_t n, double t_start, double t_end,
                const vx_options* opts, vx_table** out) {
  if (!gammas || !xy || !out) return fail(VX_E_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    VortexState s;
    s.circulations.assign(gammas, gammas + n);
    s.positions.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.positions[i] = {xy[2 * i], xy[2 * i + 1]};
    s.validate();
    auto io = base_options(opts);
    io.t_start = t_start;
    io.t_end = t_end;
    io.sample_times = uniform_times(t_start, t_end, opts ? opts->samples : 0);
    const auto g = s.circulations;
    auto tr = integrate::integrate(
        [&g](double, const double* y, double* dy) { core::rhs_flat(g.data(), g.size(), y, dy); }, s.flat(), io);
    std::vector<std::string> cols{"t"};
    for (std::size_t i = 1; i <= n; ++i) {
      cols.push_back("x" + std::to_string(i));
      cols.push_back("y" + std::to_string(i));
    }
    for (const char* c : {"H", "Theta", "Mx", "My"}) cols.emplace_back(c);
    auto tab = std::make_unique<vx_table>(cols);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      auto& r = tab->row();
      r.emplace_back(tr.t[k]);
      for (double v : tr.y[k]) r.emplace_back(v);
      const auto c = core::conserved(VortexState::from_flat(tr.y[k].data(), g));
      r.emplace_back(c.H);
      r.emplace_back(c.Theta);
      r.emplace_back(c.M[0]);
      r.emplace_back(c.M[1]);
    }
    *out = tab.release();
  });
}

int vx_reduced(const double* gammas, const double* xy, double X0, double Y0, double theta, int upper,
               double t_end, const vx_options* opts, vx_table** out) {
  if (!gammas || !out) return fail(VX_E_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto spec = spec_for(gammas);
    reduction::NambuState s0;
    if (xy) {
      VortexState lab{{{xy[0], xy[1]}, {xy[2], xy[3]}, {xy[4], xy[5]}}, {gammas[0], gammas[1], gammas[2]}};
      s0 = reduction::reduce(lab);
    } else {
      s0.X = X0;
      s0.Y = Y0;
      s0.Theta = theta;
      s0.geometry = spec.geometry();
      s0.Z = reduction::surface_z(X0, Y0, theta, s0.geometry, upper != 0);
    }
    if (s0.geometry != spec.geometry())
      throw Error(ErrorCode::InvalidArgument, "state geometry does not match the circulations");
    const bool alpha = is_dipole(gammas);
    auto io = base_options(opts);
    io.t_end = t_end;
    io.sample_times = uniform_times(0.0, t_end, opts ? opts->samples : 0);
    auto tr = reduction::integrate_reduced(spec, s0, io, alpha);
    std::vector<std::string> cols{"t", "X", "Y", "Z", "H_red", "casimir_residual"};
    if (alpha) cols.emplace_back("alpha");
    auto tab = std::make_unique<vx_table>(cols);
    for (std::size_t k = 0; k < tr.t.size(); ++k) {
      const auto& y = tr.y[k];
      const reduction::NambuState s{y[0], y[1], y[2], s0.Theta, s0.geometry};
      auto& r = tab->row();
      for (double v : {tr.t[k], y[0], y[1], y[2], reduction::reduced_hamiltonian(spec, s),
                       reduction::casimir_residual(s) / std::max(1.0, s.Z * s.Z)})
        r.emplace_back(v);
      if (alpha) r.emplace_back(y[3]);
    }
    *out = tab.release();
  });
}

int vx_reduced_levels(const double* gammas, double theta, size_t n, vx_table** out) {
  if (!gammas || !out) return fail(VX_E_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    if (n < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points per side");
    if (theta == 0.0) throw Error(ErrorCode::InvalidArgument, "theta must be nonzero");
    const auto spec = spec_for(gammas);
    const auto geo = spec.geometry();
    if (geo == reduction::Geometry::Sphere && theta < 0.0)
      throw Error(ErrorCode::InvalidArgument, "sphere radius theta must be positive");
    auto tab = std::make_unique<vx_table>(std::vector<std::string>{"kind", "label", "X", "Y", "Z", "H"});
    auto emit = [&](const std::string& kind, const std::string& label, const reduction::NambuState& s) {
      double H = kNaN;
      try {
        H = reduction::reduced_hamiltonian(spec, s);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularState) throw;
      }
      auto& r = tab->row();
      r.emplace_back(kind);
      r.emplace_back(label);
      for (double v : {s.X, s.Y, s.Z, H}) r.emplace_back(v);
    };
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        reduction::NambuState s;
        s.Theta = theta;
        s.geometry = geo;
        if (geo == reduction::Geometry::Sphere) {
          // latitude measured from the Z axis, cell centred
          const double lat = pi * (i + 0.5) / n, lon = 2.0 * pi * j / n;
          s.X = theta * std::sin(lat) * std::cos(lon);
          s.Y = theta * std::sin(lat) * std::sin(lon);
          s.Z = theta * std::cos(lat);
        } else {
          const double R = 4.0 * std::abs(theta);
          s.X = -R + 2.0 * R * i / (n - 1);
          s.Y = -R + 2.0 * R * j / (n - 1);
          s.Z = reduction::surface_z(s.X, s.Y, theta, geo);
        }
        emit("grid", "", s);
      }
    for (const auto& p : critical_points(gammas, theta))
      emit("critical", p.kind == equilibria::Kind::Equilibrium ? p.label : p.label + ":" + p.pair, p.state());
    *out = tab.release();
  });
}

int vx_scatter(double rho, double gamma, double L, double d, const vx_options* opts, vx_table** out) {
  if (!out) return fail(VX_E_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    scattering::RunOptions ro;
    if (opts) {
      ro.rtol = opts->rtol;
      ro.atol = opts->atol;
      ro.t_max = opts->t_max;
    }
    const scattering::Setup s{rho, gamma, L, d};
    const auto r = scattering::run(s, ro);
    auto tab = std::make_unique<vx_table>(std::vector<std::string>{
        "rho", "Gamma", "Theta", "delta_alpha", "delta_alpha_reduced", "outcome", "initial_partner",
        "final_partner", "d13", "d23", "min_distance", "x_crossings", "y_crossings", "max_X", "t_final",
        "drift_H", "drift_M", "drift_Theta", "casimir"});
    auto& row = tab->row();
    row = Row{rho, gamma, s.Theta(), r.delta_alpha, opt(r.delta_alpha_reduced),
              std::string(scattering::outcome_name(r.outcome)), double(r.initial_partner), double(r.final_partner),
              r.d13, r.d23, r.min_distance, double(r.x_crossings), double(r.y_crossings), r.max_X, r.t_final,
              r.drift_H, r.drift_M, r.drift_Theta, r.casimir};
    *out = tab.release();
  });
}

int vx_sweep(const double* rhos, size_t n, double gamma, double L, double d, const vx_options* opts,
             vx_table** rows, vx_table** discontinuities) {
  if (!rhos || !rows) return fail(VX_E_NULL_ARGUMENT, "null argument");
  *rows = nullptr;
  if (discontinuities) *discontinuities = nullptr;
  return guarded([&] {
    scattering::RunOptions ro;
    int jobs = 1;
    if (opts) {
      ro.rtol = opts->rtol;
      ro.atol = opts->atol;
      ro.t_max = opts->t_max;
      jobs = opts->jobs;
    }
    scattering::Setup base{0.0, gamma, L, d};
    const auto res = scattering::sweep(std::vector<double>(rhos, rhos + n), gamma, base, ro, jobs);
    auto tab = std::make_unique<vx_table>(std::vector<std::string>{
        "rho", "Theta", "delta_alpha", "delta_alpha_reduced", "outcome", "flags", "x_crossings", "y_crossings",
        "max_X", "t_final", "error"});
    for (const auto& r : res) {
      auto& row = tab->row();
      const bool ok = r.error.empty();
      row = Row{r.rho,
                r.Theta,
                r.delta_alpha,
                opt(r.delta_alpha_reduced),
                std::string(r.outcome ? scattering::outcome_name(*r.outcome) : ""),
                std::string(r.near_separatrix ? "near-separatrix" : ""),
                ok ? double(r.result.x_crossings) : kNaN,
                ok ? double(r.result.y_crossings) : kNaN,
                ok ? r.result.max_X : kNaN,
                ok ? r.result.t_final : kNaN,
                r.error};
    }
    if (discontinuities) {
      auto dt = std::make_unique<vx_table>(std::vector<std::string>{"rho_left", "rho_right", "jump", "kind"});
      for (const auto& dc : scattering::analyze(res)) {
        auto& row = dt->row();
        row = Row{dc.rho_left, dc.rho_right, dc.jump,
                  std::string(dc.divergence ? "divergence" : (dc.two_pi ? "2pi-jump" : "jump"))};
      }
      *discontinuities = dt.release();
    }
    *rows = tab.release();
  });
}

int vx_critical(const double* gammas, size_t n, vx_table** out) {
  if (!gammas || !out) return fail(VX_E_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto tab = std::make_unique<vx_table>(std::vector<std::string>{"Gamma", "rho_minus", "rho_plus",
                                                                  "rho_minus_bisection", "rho_plus_bisection"});
    for (std::size_t k = 0; k < n; ++k) {
      const auto c = equilibria::critical_rho(gammas[k]);
      auto& row = tab->row();
      row = Row{gammas[k], c.rho_minus, opt(c.rho_plus), opt(c.rho_minus_bisection), opt(c.rho_plus_bisection)};
    }
    *out = tab.release();
  });
}

int vx_equilibria(int family, double gamma, double theta, vx_table** out) {
  if (!out) return fail(VX_E_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::vector<equilibria::CriticalPoint> pts;
    if (family == 0) pts = equilibria::equilibria_111(theta);
    else if (family == 1) pts = gamma == 1.0 ? equilibria::equilibria_11m1(theta) : equilibria::equilibria_gamma(gamma, theta);
    else throw Error(ErrorCode::InvalidArgument, "family must be 0 or 1");
    auto tab = std::make_unique<vx_table>(std::vector<std::string>{
        "label", "kind", "pair", "X", "Y", "Z", "Theta", "degenerate", "type", "ev0_re", "ev0_im", "ev1_re",
        "ev1_im", "ev2_re", "ev2_im"});
    for (const auto& p : pts) {
      auto& row = tab->row();
      row = Row{p.label,
                std::string(p.kind == equilibria::Kind::Equilibrium ? "equilibrium" : "singularity"),
                p.pair,
                p.coords[0],
                p.coords[1],
                p.coords[2],
                p.Theta,
                p.degenerate ? 1.0 : 0.0,
                p.type};
      for (int k = 0; k < 3; ++k) {
        row.emplace_back(p.eigenvalues ? (*p.eigenvalues)[k].real() : kNaN);
        row.emplace_back(p.eigenvalues ? (*p.eigenvalues)[k].imag() : kNaN);
      }
    }
    *out = tab.release();
  });
}

int vx_bifurcation(double theta, double gmin, double gmax, int steps, vx_table** out) {
  if (!out) return fail(VX_E_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto tab = std::make_unique<vx_table>(
        std::vector<std::string>{"Gamma", "label", "kind", "X", "exists", "degenerate"});
    for (const auto& b : equilibria::bifurcation_sweep(theta, gmin, gmax, steps)) {
      auto& row = tab->row();
      row = Row{b.Gamma, b.label,
                std::string(b.kind == equilibria::Kind::Equilibrium ? "equilibrium" : "singularity"), b.X,
                b.exists ? 1.0 : 0.0, b.degenerate ? 1.0 : 0.0};
    }
    *out = tab.release();
  });
}

int vx_closed_form(const double* rhos, size_t n, vx_table** out) {
  if (!rhos || !out) return fail(VX_E_NULL_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto tab = std::make_unique<vx_table>(std::vector<std::string>{
        "rho", "Theta", "regime", "delta_alpha_closed", "delta_alpha_quadrature", "error"});
    for (std::size_t k = 0; k < n; ++k) {
      const double T = elliptic::theta_from_rho(rhos[k]);
      auto& row = tab->row();
      std::string regime, err;
      double closed = kNaN, quad = kNaN;
      try {
        regime = elliptic::regime_name(elliptic::p4_factor(T).regime);
        closed = elliptic::delta_alpha_closed(T);
        quad = elliptic::delta_alpha_quadrature(T);
      } catch (const Error& e) {
        err = error_name(e.code());
      }
      row = Row{rhos[k], T, regime, closed, quad, err};
    }
    *out = tab.release();
  });
}

}  // extern "C"
