#pragma once

namespace vortex::elliptic {

// Carlson symmetric integrals (duplication algorithm).
double carlson_rf(double x, double y, double z);
double carlson_rc(double x, double y);  // Cauchy principal value for y < 0
double carlson_rj(double x, double y, double z, double p);  // principal value for p < 0

// Complete integrals in the parameter convention K(m) = int dt / sqrt(1 - m sin^2 t).
double ellint_k(double m);
double ellint_pi(double n, double m);

enum class Regime { ComplexPair, RealReal, RealImag, ImagImag };
const char* regime_name(Regime r);

// p4(u) = u^2 + 2(T^2 - 4T - 8) u + (T - 8) T^3 with u = Y^2.
struct QuarticFactorization {
  Regime regime;
  double a_sq;
  double b_sq;
  double Y_min;
  bool degenerate = false;
};

// Throws BoundaryTheta only for non-finite input; boundary values
// -1, 0, 8 resolve to the neighbouring regime with `degenerate` set.
QuarticFactorization p4_factor(double Theta);
// Coefficients (c1, c0) of u^2 + c1 u + c0 rebuilt from the factored form.
void p4_expand(const QuarticFactorization& q, double& c1, double& c0);

// Delta alpha = c_K K(m) + c_Pi1 Pi(n1, m) + c_Pi2 Pi(n2, m).
struct ClosedFormTerms {
  Regime regime;
  double m;
  double n1, n2;
  double c_K, c_Pi1, c_Pi2;
};

ClosedFormTerms closed_form_terms(double Theta);

// Scattering angle of the (1,1,-1) dipole as a function of the angular impulse.
double delta_alpha_closed(double Theta);
double delta_alpha_quadrature(double Theta);

inline double theta_from_rho(double rho) { return 1.0 + 2.0 * rho; }

}  // namespace vortex::elliptic
