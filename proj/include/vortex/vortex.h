#ifndef VORTEX_VORTEX_H
#define VORTEX_VORTEX_H

#include <stddef.h>

#if defined(_WIN32)
#define VX_API __declspec(dllexport)
#else
#define VX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. 1..18 mirror the library error kinds. */
enum {
  VX_OK = 0,
  VX_E_COINCIDENT_VORTICES = 1,
  VX_E_STEP_SIZE_UNDERFLOW,
  VX_E_NON_FINITE_RHS,
  VX_E_INVALID_TRIANGLE,
  VX_E_ZERO_SIDE,
  VX_E_ZERO_CIRCULATION_PRODUCT,
  VX_E_ZERO_DENOMINATOR,
  VX_E_DEGENERATE_CIRCULATION_SUM,
  VX_E_SINGULAR_STATE,
  VX_E_DEGENERATE_DENOMINATOR,
  VX_E_NOT_AN_EQUILIBRIUM,
  VX_E_GAMMA_ONE,
  VX_E_BAD_SETUP,
  VX_E_NO_ESCAPE,
  VX_E_DOMAIN_ERROR,
  VX_E_BOUNDARY_THETA,
  VX_E_QUADRATURE_NON_CONVERGENCE,
  VX_E_INVALID_ARGUMENT,
  VX_E_NULL_ARGUMENT = 100,
  VX_E_INTERNAL = 101
};

/* Result table: named columns, each cell a number or a text value. */
typedef struct vx_table vx_table;

typedef struct vx_options {
  double rtol;
  double atol;
  double t_max;    /* escape budget for scattering runs */
  int jobs;        /* worker threads for sweeps */
  size_t samples;  /* output samples for trajectories; 0 keeps every step */
} vx_options;

VX_API const char* vx_version(void);
VX_API void vx_options_default(vx_options* opts);
/* Message of the last failure on the calling thread ("" if none). */
VX_API const char* vx_last_error(void);
VX_API const char* vx_status_name(int status);

VX_API size_t vx_table_rows(const vx_table* t);
VX_API size_t vx_table_cols(const vx_table* t);
VX_API const char* vx_table_column(const vx_table* t, size_t col);
VX_API int vx_table_is_text(const vx_table* t, size_t row, size_t col);
/* NaN for text cells or out-of-range indices. */
VX_API double vx_table_number(const vx_table* t, size_t row, size_t col);
/* NULL for numeric cells or out-of-range indices. */
VX_API const char* vx_table_text(const vx_table* t, size_t row, size_t col);
VX_API void vx_table_free(vx_table* t);

/* Launch positions (x1, y1, x2, y2, x3, y3) for circulations (1, gamma, -1). */
VX_API int vx_scattering_state(double rho, double gamma, double L, double d, double* xy_out);

/* Full N-vortex integration. Columns t, x1, y1, ..., H, Theta, Mx, My. */
VX_API int vx_simulate(const double* gammas, const double* xy, size_t n, double t_start, double t_end,
                       const vx_options* opts, vx_table** out);

/* Reduced three-vortex flow. casimir_residual is relative to max(1, Z^2).
   The initial point is the reduced image of the
   lab state xy when xy is non-NULL, otherwise (X0, Y0) on the surface of
   angular impulse theta (upper or lower half of the sphere). Columns t, X, Y,
   Z, H_red, casimir_residual, and alpha for (1, 1, -1). */
VX_API int vx_reduced(const double* gammas, const double* xy, double X0, double Y0, double theta, int upper,
                      double t_end, const vx_options* opts, vx_table** out);

/* Reduced Hamiltonian sampled on an n-by-n grid over the reduced surface
   (rows of kind "grid"), followed by the critical points with their energies
   (kind "critical"). Columns kind, label, X, Y, Z, H. */
VX_API int vx_reduced_levels(const double* gammas, double theta, size_t n, vx_table** out);

/* One scattering run; a single row of results. */
VX_API int vx_scatter(double rho, double gamma, double L, double d, const vx_options* opts, vx_table** out);

/* Scattering sweep. Rows: rho, Theta, delta_alpha, delta_alpha_reduced,
   outcome, flags, error. Discontinuities (may be NULL): rho_left, rho_right,
   jump, kind. */
VX_API int vx_sweep(const double* rhos, size_t n, double gamma, double L, double d, const vx_options* opts,
                    vx_table** rows, vx_table** discontinuities);

/* Columns Gamma, rho_minus, rho_plus, rho_minus_bisection, rho_plus_bisection. */
VX_API int vx_critical(const double* gammas, size_t n, vx_table** out);

/* family 0: identical (1, 1, 1); family 1: (1, gamma, -1). */
VX_API int vx_equilibria(int family, double gamma, double theta, vx_table** out);

VX_API int vx_bifurcation(double theta, double gamma_min, double gamma_max, int steps, vx_table** out);

/* Columns rho, Theta, regime, delta_alpha_closed, delta_alpha_quadrature, error. */
VX_API int vx_closed_form(const double* rhos, size_t n, vx_table** out);

#ifdef __cplusplus
}
#endif

#endif
