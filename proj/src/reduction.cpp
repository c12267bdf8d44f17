#include "vortex/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "vortex/errors.hpp"

namespace vortex::reduction {

using cplx = std::complex<double>;

const char* selector_name(Selector s) {
  switch (s) {
    case Selector::GeneralPositive: return "general-positive";
    case Selector::GeneralNegative: return "general-negative";
    case Selector::Specialized111: return "specialized-111";
    case Selector::Specialized11m1: return "specialized-11m1";
    case Selector::SpecializedGamma: return "specialized-gamma";
  }
  return "?";
}

namespace {

void kappas(const std::array<double, 3>& g, double& k1, double& k2, double& k3) {
  const double s12 = g[0] + g[1], s = g[0] + g[1] + g[2];
  if (s12 == 0.0 || s == 0.0)
    raise(ErrorCode::DegenerateCirculationSum, "partial circulation sums must not vanish");
  k1 = g[0] * g[1] / s12;
  k2 = s12 * g[2] / s;
  k3 = s;
}

}  // namespace

ReducedSystemSpec ReducedSystemSpec::general(const std::array<double, 3>& g) {
  if (!(g[0] > 0.0) || !(g[1] > 0.0))
    raise(ErrorCode::InvalidArgument, "reduction needs the first two circulations positive");
  if (g[2] == 0.0) raise(ErrorCode::InvalidArgument, "third circulation must not vanish");
  ReducedSystemSpec s;
  s.gammas = g;
  kappas(g, s.kappa1, s.kappa2, s.kappa3);
  s.coupling = std::sqrt(s.kappa1 / std::abs(s.kappa2));
  s.selector = s.kappa2 > 0.0 ? Selector::GeneralPositive : Selector::GeneralNegative;
  s.offset = 0.0;
  return s;
}

ReducedSystemSpec ReducedSystemSpec::identical() {
  auto s = general({1.0, 1.0, 1.0});
  s.selector = Selector::Specialized111;
  return s;
}

ReducedSystemSpec ReducedSystemSpec::dipole() {
  auto s = general({1.0, 1.0, -1.0});
  s.selector = Selector::Specialized11m1;
  s.offset = -std::log(2.0);
  return s;
}

ReducedSystemSpec ReducedSystemSpec::gamma_family(double G) {
  if (!(G > 0.0)) raise(ErrorCode::InvalidArgument, "Gamma must be positive");
  if (G == 1.0) return dipole();
  auto s = general({1.0, G, -1.0});
  s.selector = Selector::SpecializedGamma;
  s.offset = -G * std::log1p(G) + 0.5 * std::log(G) - 0.5 * std::log1p(G);
  return s;
}

std::vector<LogTerm> log_terms(const ReducedSystemSpec& spec, double T) {
  const auto& g = spec.gammas;
  const double k1 = spec.kappa1, k2 = spec.kappa2, c = spec.coupling;
  switch (spec.selector) {
    case Selector::GeneralPositive:
      return {
          {-0.5 * g[0] * g[1], 0.0, 1.0 / (2.0 * k1), T / (2.0 * k1), "12"},
          {-0.5 * g[1] * g[2], -c / g[1], -1.0 / (2.0 * k2) + k1 / (2.0 * g[1] * g[1]),
           T / (2.0 * k2) + k1 * T / (2.0 * g[1] * g[1]), "23"},
          {-0.5 * g[0] * g[2], c / g[0], -1.0 / (2.0 * k2) + k1 / (2.0 * g[0] * g[0]),
           T / (2.0 * k2) + k1 * T / (2.0 * g[0] * g[0]), "13"},
      };
    case Selector::GeneralNegative: {
      const double ak2 = std::abs(k2);
      return {
          {-0.5 * g[0] * g[1], 0.0, 1.0 / (2.0 * k1), T / (2.0 * k1), "12"},
          {-0.5 * g[1] * g[2], -c / g[1], 1.0 / (2.0 * ak2) + k1 / (2.0 * g[1] * g[1]),
           -T / (2.0 * ak2) + k1 * T / (2.0 * g[1] * g[1]), "23"},
          {-0.5 * g[0] * g[2], c / g[0], 1.0 / (2.0 * ak2) + k1 / (2.0 * g[0] * g[0]),
           -T / (2.0 * ak2) + k1 * T / (2.0 * g[0] * g[0]), "13"},
      };
    }
    case Selector::Specialized111: {
      const double h = std::sqrt(3.0) / 2.0;
      return {
          {-0.5, 0.0, 1.0, T, "12"},
          {-0.5, -h, -0.5, T, "23"},
          {-0.5, h, -0.5, T, "13"},
      };
    }
    case Selector::Specialized11m1:
      return {
          {-0.5, 0.0, 1.0, T, "12"},
          {0.5, -1.0, 1.0, 0.0, "23"},
          {0.5, 1.0, 1.0, 0.0, "13"},
      };
    case Selector::SpecializedGamma: {
      const double G = g[1];
      return {
          {-0.5 * G, 0.0, 1.0, T, "12"},
          {0.5 * G, -2.0 * G, G * G + 1.0, (1.0 - G * G) * T, "23"},
          {0.5, 1.0, 1.0, 0.0, "13"},
      };
    }
  }
  return {};
}

JacobiFrame to_jacobi(const VortexState& s) {
  s.validate();
  if (s.size() != 3) raise(ErrorCode::InvalidArgument, "Jacobi coordinates need three vortices");
  const auto& g = s.circulations;
  const auto& r = s.positions;
  JacobiFrame f;
  kappas({g[0], g[1], g[2]}, f.kappa1, f.kappa2, f.kappa3);
  const double s12 = g[0] + g[1], st = f.kappa3;
  for (int c = 0; c < 2; ++c) {
    f.R1[c] = r[0][c] - r[1][c];
    f.R2[c] = (g[0] * r[0][c] + g[1] * r[1][c]) / s12 - r[2][c];
    f.R3[c] = (g[0] * r[0][c] + g[1] * r[1][c] + g[2] * r[2][c]) / st;
  }
  return f;
}

VortexState from_jacobi(const JacobiFrame& f, const std::array<double, 3>& g) {
  double k1, k2, k3;
  kappas(g, k1, k2, k3);
  const double s12 = g[0] + g[1], st = g[0] + g[1] + g[2];
  VortexState s;
  s.circulations = {g[0], g[1], g[2]};
  s.positions.resize(3);
  for (int c = 0; c < 2; ++c) {
    s.positions[0][c] = f.R3[c] + g[1] / s12 * f.R1[c] + g[2] / st * f.R2[c];
    s.positions[1][c] = f.R3[c] - g[0] / s12 * f.R1[c] + g[2] / st * f.R2[c];
    s.positions[2][c] = f.R3[c] - s12 / st * f.R2[c];
  }
  return s;
}

NambuState to_nambu(const JacobiFrame& f) {
  if (!(f.kappa1 > 0.0) || f.kappa2 == 0.0)
    raise(ErrorCode::InvalidArgument, "Nambu coordinates need kappa1 > 0 and kappa2 != 0");
  const cplx a = std::sqrt(f.kappa1) * cplx(f.R1[0], f.R1[1]);
  NambuState s;
  if (f.kappa2 > 0.0) {
    const cplx b = std::sqrt(f.kappa2) * cplx(f.R2[0], f.R2[1]);
    const cplx w = 2.0 * a * std::conj(b);
    s.Z = std::norm(a) - std::norm(b);
    s.X = w.real();
    s.Y = w.imag();
    s.Theta = std::norm(a) + std::norm(b);
    s.geometry = Geometry::Sphere;
  } else {
    const cplx b = std::sqrt(-f.kappa2) * cplx(f.R2[0], -f.R2[1]);
    const cplx w = 2.0 * a * b;
    s.Z = std::norm(a) + std::norm(b);
    s.X = w.real();
    s.Y = w.imag();
    s.Theta = std::norm(a) - std::norm(b);
    s.geometry = Geometry::Hyperboloid;
  }
  return s;
}

NambuState reduce(const VortexState& s) { return to_nambu(to_jacobi(s)); }

VortexState lift(const NambuState& s, const std::array<double, 3>& g) {
  JacobiFrame f;
  kappas(g, f.kappa1, f.kappa2, f.kappa3);
  const bool sphere = f.kappa2 > 0.0;
  if (sphere != (s.geometry == Geometry::Sphere))
    raise(ErrorCode::InvalidArgument, "geometry does not match the circulations");
  const double a2 = 0.5 * (s.Z + s.Theta);
  const double b2 = sphere ? 0.5 * (s.Theta - s.Z) : 0.5 * (s.Z - s.Theta);
  if (a2 < 0.0 || b2 < 0.0) raise(ErrorCode::InvalidArgument, "point is off the reduced surface");
  const double a = std::sqrt(a2);
  const cplx w(s.X, s.Y);
  cplx b;
  if (a > 0.0) b = sphere ? std::conj(w / (2.0 * a)) : w / (2.0 * a);
  else b = std::sqrt(b2);
  f.R1 = {a / std::sqrt(f.kappa1), 0.0};
  const cplx R2 = sphere ? b / std::sqrt(f.kappa2) : std::conj(b) / std::sqrt(-f.kappa2);
  f.R2 = {R2.real(), R2.imag()};
  return from_jacobi(f, g);
}

double reduced_hamiltonian(const ReducedSystemSpec& spec, const NambuState& s) {
  double h = 0.0;
  for (const auto& t : log_terms(spec, s.Theta)) {
    const double arg = t.cX * s.X + t.cZ * s.Z + t.c0;
    if (!(arg > 0.0))
      raise(ErrorCode::SingularState, "log argument of pair " + t.pair + " is " + std::to_string(arg));
    h += t.coeff * std::log(arg);
  }
  return h;
}

std::array<double, 3> hamiltonian_gradient(const ReducedSystemSpec& spec, const NambuState& s) {
  std::array<double, 3> grad{0.0, 0.0, 0.0};
  for (const auto& t : log_terms(spec, s.Theta)) {
    const double arg = t.cX * s.X + t.cZ * s.Z + t.c0;
    if (!(arg > 0.0))
      raise(ErrorCode::SingularState, "log argument of pair " + t.pair + " is " + std::to_string(arg));
    grad[0] += t.coeff * t.cX / arg;
    grad[2] += t.coeff * t.cZ / arg;
  }
  return grad;
}

std::array<double, 3> nambu_rhs(const ReducedSystemSpec& spec, const NambuState& s) {
  const auto h = hamiltonian_gradient(spec, s);
  // grad C = 4 (X, Y, +-Z): C = 2(X^2 + Y^2 + Z^2) on the sphere and
  // 2(X^2 + Y^2 - Z^2) on the hyperboloid.
  const double zc = s.geometry == Geometry::Sphere ? s.Z : -s.Z;
  return {4.0 * (s.Y * h[2] - zc * h[1]), 4.0 * (zc * h[0] - s.X * h[2]), 4.0 * (s.X * h[1] - s.Y * h[0])};
}

std::array<double, 3> nambu_rhs_closed(const ReducedSystemSpec& spec, const NambuState& s) {
  const double X = s.X, Y = s.Y, Z = s.Z, T = s.Theta;
  if (spec.selector == Selector::Specialized11m1) {
    const double zt = Z + T, q = Z * Z - X * X;
    if (!(zt > 0.0) || !(q > 0.0)) raise(ErrorCode::SingularState, "Z + Theta or Z^2 - X^2 vanished");
    return {-2.0 * Y / zt + 4.0 * Z * Y / q, 2.0 * X / zt, 4.0 * X * Y / q};
  }
  if (spec.selector == Selector::SpecializedGamma) {
    const double G = spec.gammas[1];
    const double A = Z * (G * G + 1.0) + (1.0 - G * G) * T - 2.0 * G * X;
    const double zt = Z + T, zx = Z + X;
    if (!(A > 0.0) || !(zt > 0.0) || !(zx > 0.0)) raise(ErrorCode::SingularState, "log argument vanished");
    const double c = 2.0 * G * (1.0 + G * G);
    return {-(2.0 * G * Y / zt - 2.0 * Y / zx - c * Y / A),
            -(2.0 - 2.0 * G * X / zt + (c * X - 4.0 * G * G * Z) / A),
            -(2.0 * Y / zx - 4.0 * G * G * Y / A)};
  }
  return nambu_rhs(spec, s);
}

double casimir_residual(const NambuState& s) {
  if (s.geometry == Geometry::Sphere) return s.Theta * s.Theta - (s.Z * s.Z + s.X * s.X + s.Y * s.Y);
  return s.Theta * s.Theta - (s.Z * s.Z - s.X * s.X - s.Y * s.Y);
}

double surface_z(double X, double Y, double T, Geometry g, bool upper) {
  if (g == Geometry::Hyperboloid) return std::sqrt(T * T + X * X + Y * Y);
  const double r = T * T - X * X - Y * Y;
  if (r < 0.0) raise(ErrorCode::InvalidArgument, "point lies outside the sphere");
  return upper ? std::sqrt(r) : -std::sqrt(r);
}

double alpha_rate(const NambuState& s) {
  const double X2 = s.X * s.X, Y2 = s.Y * s.Y, T = s.Theta;
  const double den = (X2 + Y2) * (T * T + Y2);
  if (den == 0.0) raise(ErrorCode::DegenerateDenominator, "(X^2+Y^2)(Theta^2+Y^2) vanished");
  return -4.0 * T * Y2 / den;
}

double theta2_rate(const NambuState& s) {
  const double X2 = s.X * s.X, Y2 = s.Y * s.Y, T = s.Theta;
  const double den = (X2 + Y2) * (T * T + Y2);
  if (den == 0.0) raise(ErrorCode::DegenerateDenominator, "(X^2+Y^2)(Theta^2+Y^2) vanished");
  return (2.0 * Y2 * std::sqrt(T * T + X2 + Y2) - 2.0 * T * X2) / den;
}

Relabeling canonical_order(const std::array<double, 3>& g) {
  if (g[0] == 0.0 || g[1] == 0.0 || g[2] == 0.0) raise(ErrorCode::InvalidArgument, "zero circulation");
  Relabeling r;
  const int negatives = (g[0] < 0.0) + (g[1] < 0.0) + (g[2] < 0.0);
  r.time_reversed = negatives >= 2;
  std::array<double, 3> h = g;
  if (r.time_reversed)
    for (auto& v : h) v = -v;
  std::array<int, 3> idx{0, 1, 2};
  // Positive circulations first in decreasing order, then the negative one.
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    const bool pa = h[a] > 0.0, pb = h[b] > 0.0;
    if (pa != pb) return pa;
    return h[a] > h[b];
  });
  r.order = idx;
  for (int k = 0; k < 3; ++k) r.gammas[k] = h[idx[k]];
  return r;
}

std::vector<NambuState> map_trajectory(const integrate::Trajectory& traj, const std::array<double, 3>& g) {
  if (traj.dim != 6) raise(ErrorCode::InvalidArgument, "expected a three-vortex trajectory");
  std::vector<NambuState> out;
  out.reserve(traj.y.size());
  const std::vector<double> gv{g[0], g[1], g[2]};
  for (const auto& y : traj.y) out.push_back(reduce(VortexState::from_flat(y.data(), gv)));
  return out;
}

integrate::Rhs reduced_field(const ReducedSystemSpec& spec, double Theta, bool with_alpha, bool closed_form) {
  if (with_alpha && spec.selector != Selector::Specialized11m1 &&
      !(spec.gammas[0] == 1.0 && spec.gammas[1] == 1.0 && spec.gammas[2] == -1.0))
    raise(ErrorCode::InvalidArgument, "heading rate is available for (1,1,-1) only");
  const Geometry geo = spec.geometry();
  return [spec, Theta, geo, with_alpha, closed_form](double, const double* y, double* dy) {
    const NambuState s{y[0], y[1], y[2], Theta, geo};
    const auto v = closed_form ? nambu_rhs_closed(spec, s) : nambu_rhs(spec, s);
    dy[0] = v[0];
    dy[1] = v[1];
    dy[2] = v[2];
    if (with_alpha) dy[3] = alpha_rate(s);
  };
}

integrate::Trajectory integrate_reduced(const ReducedSystemSpec& spec, const NambuState& s0,
                                        integrate::Options opts, bool with_alpha, bool closed_form) {
  std::vector<double> y0{s0.X, s0.Y, s0.Z};
  if (with_alpha) y0.push_back(0.0);
  const double T = s0.Theta;
  const Geometry geo = spec.geometry();
  opts.monitors.push_back({"casimir",
                           [T, geo](const double* y) { return casimir_residual({y[0], y[1], y[2], T, geo}); },
                           1e-8, std::max(1.0, T * T)});
  opts.monitors.push_back({"energy",
                           [spec, T, geo](const double* y) {
                             return reduced_hamiltonian(spec, {y[0], y[1], y[2], T, geo});
                           },
                           1e-8, std::max(1.0, std::abs(reduced_hamiltonian(spec, s0)))});
  return integrate::integrate(reduced_field(spec, T, with_alpha, closed_form), y0, opts);
}

}  // namespace vortex::reduction
