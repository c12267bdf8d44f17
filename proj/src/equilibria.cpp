#include "vortex/equilibria.hpp"

#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

#include "vortex/errors.hpp"
#include "vortex/scattering.hpp"

namespace vortex::equilibria {

using reduction::Geometry;
using reduction::NambuState;
using reduction::ReducedSystemSpec;

namespace {

const double kSqrt3 = std::sqrt(3.0);
const double kSaddleNode = std::sqrt(3.0) / 2.0;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double hyper_z(double X, double Y, double T) { return std::sqrt(T * T + X * X + Y * Y); }

// sqrt(4 G^2 - 3), clamped to zero within rounding of the saddle-node value.
double disc(double G) {
  const double r = 4.0 * G * G - 3.0;
  if (std::abs(r) < 1e-14) return 0.0;
  return r < 0.0 ? kNaN : std::sqrt(r);
}

bool at_saddle_node(double G) { return std::abs(4.0 * G * G - 3.0) < 1e-14; }

double x_em1(double G, double T) { return 4.0 * G * T * (G * G - 1.0) / (1.0 - 2.0 * G * G - disc(G)); }
double x_eg(double G, double T) { return G * T * (1.0 - 2.0 * G * G - disc(G)) / (G * G - 1.0); }
double x_sm1g(double G, double T) { return 2.0 * G * T / (G * G - 1.0); }

CriticalPoint make(double X, double Y, double Z, double T, Geometry geo, Kind kind, std::string label,
                   std::string pair = {}) {
  CriticalPoint p;
  p.coords = {X, Y, Z};
  p.Theta = T;
  p.geometry = geo;
  p.kind = kind;
  p.label = std::move(label);
  p.pair = std::move(pair);
  return p;
}

void classify(const ReducedSystemSpec& spec, std::vector<CriticalPoint>& pts) {
  for (auto& p : pts) {
    if (p.kind != Kind::Equilibrium) continue;
    const auto lin = jacobian(spec, p);
    p.eigenvalues = lin.eigenvalues;
    const auto l = lin.eigenvalues[1];
    const double mag = std::abs(l);
    if (mag < 1e-9) p.type = "degenerate";
    else if (std::abs(l.imag()) > std::abs(l.real())) p.type = "center";
    else p.type = "saddle";
  }
}

}  // namespace

std::vector<CriticalPoint> equilibria_111(double T) {
  if (!(T > 0.0)) raise(ErrorCode::InvalidArgument, "Theta must be positive for identical vortices");
  const double h = kSqrt3 / 2.0 * T;
  const auto S = Geometry::Sphere;
  std::vector<CriticalPoint> pts{
      make(0.0, 0.0, T, T, S, Kind::Equilibrium, "collinear-eq"),
      make(h, 0.0, -T / 2, T, S, Kind::Equilibrium, "collinear-eq"),
      make(-h, 0.0, -T / 2, T, S, Kind::Equilibrium, "collinear-eq"),
      make(0.0, T, 0.0, T, S, Kind::Equilibrium, "pole+"),
      make(0.0, -T, 0.0, T, S, Kind::Equilibrium, "pole-"),
      make(0.0, 0.0, -T, T, S, Kind::Singularity, "pair-singularity", "12"),
      make(h, 0.0, T / 2, T, S, Kind::Singularity, "pair-singularity", "23"),
      make(-h, 0.0, T / 2, T, S, Kind::Singularity, "pair-singularity", "13"),
  };
  classify(ReducedSystemSpec::identical(), pts);
  return pts;
}

std::vector<CriticalPoint> equilibria_11m1(double T) {
  const auto H = Geometry::Hyperboloid;
  std::vector<CriticalPoint> pts;
  if (T < 0.0) {
    pts.push_back(make(0.0, kSqrt3 * T, -2.0 * T, T, H, Kind::Equilibrium, "E_tri+"));
    pts.push_back(make(0.0, -kSqrt3 * T, -2.0 * T, T, H, Kind::Equilibrium, "E_tri-"));
    pts.push_back(make(0.0, 0.0, -T, T, H, Kind::Singularity, "S_11", "12"));
  } else if (T > 0.0) {
    pts.push_back(make(0.0, 0.0, T, T, H, Kind::Equilibrium, "E_-1"));
  }
  classify(ReducedSystemSpec::dipole(), pts);
  return pts;
}

std::vector<CriticalPoint> equilibria_gamma(double G, double T) {
  if (!(G > 0.0)) raise(ErrorCode::InvalidArgument, "Gamma must be positive");
  if (G == 1.0) raise(ErrorCode::GammaOne, "use the (1,1,-1) routine at Gamma = 1");
  const auto H = Geometry::Hyperboloid;
  std::vector<CriticalPoint> pts;
  auto eq = [&](double X, double Y, const char* label) {
    pts.push_back(make(X, Y, hyper_z(X, Y, T), T, H, Kind::Equilibrium, label));
  };
  auto sing = [&](double X, const char* label, const char* pair) {
    pts.push_back(make(X, 0.0, hyper_z(X, 0.0, T), T, H, Kind::Singularity, label, pair));
  };
  if (T < 0.0) {
    const double X = T * G * (G - 1.0) / (G + 1.0);
    eq(X, kSqrt3 * G * T, "E_tri+");
    eq(X, -kSqrt3 * G * T, "E_tri-");
    if (G > 1.0) eq(x_eg(G, T), 0.0, "E_1");
    sing(0.0, "S_1Gamma", "12");
    if (G < 1.0) sing(x_sm1g(G, T), "S_-1Gamma", "23");
  } else if (T > 0.0) {
    const bool sn = at_saddle_node(G);
    if (G >= kSaddleNode || sn) {
      eq(x_em1(G, T), 0.0, "E_-1");
      pts.back().degenerate = sn;
      if (G < 1.0) {
        eq(x_eg(G, T), 0.0, "E_Gamma");
        pts.back().degenerate = sn;
      }
    }
    if (G > 1.0) sing(x_sm1g(G, T), "S_-1Gamma", "23");
  }
  classify(ReducedSystemSpec::gamma_family(G), pts);
  return pts;
}

Linearization jacobian(const ReducedSystemSpec& spec, const NambuState& s) {
  const auto f = reduction::nambu_rhs(spec, s);
  const auto g = reduction::hamiltonian_gradient(spec, s);
  const double sg = s.geometry == Geometry::Sphere ? 1.0 : -1.0;
  const std::array<double, 3> w{s.X, s.Y, sg * s.Z};
  const double fnorm = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
  const double wn = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
  const double gn = std::sqrt(g[0] * g[0] + g[2] * g[2]);
  if (fnorm > 1e-9 * std::max(1.0, 4.0 * wn * gn))
    raise(ErrorCode::NotAnEquilibrium, "field norm " + std::to_string(fnorm));

  // Hessian in (X, Z); H does not depend on Y.
  double hxx = 0.0, hxz = 0.0, hzz = 0.0;
  for (const auto& t : reduction::log_terms(spec, s.Theta)) {
    const double arg = t.cX * s.X + t.cZ * s.Z + t.c0;
    const double c = -t.coeff / (arg * arg);
    hxx += c * t.cX * t.cX;
    hxz += c * t.cX * t.cZ;
    hzz += c * t.cZ * t.cZ;
  }
  auto cross = [](const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  const std::array<std::array<double, 3>, 3> dw{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, sg}}};
  const std::array<std::array<double, 3>, 3> dg{{{hxx, 0.0, hxz}, {0.0, 0.0, 0.0}, {hxz, 0.0, hzz}}};
  Linearization lin;
  for (int m = 0; m < 3; ++m) {
    const auto a = cross(dw[m], g), b = cross(w, dg[m]);
    for (int i = 0; i < 3; ++i) lin.J[i][m] = 4.0 * (a[i] + b[i]);
  }
  const auto& J = lin.J;
  const double tr = J[0][0] + J[1][1] + J[2][2];
  const double m2 = J[0][0] * J[1][1] - J[0][1] * J[1][0] + J[0][0] * J[2][2] - J[0][2] * J[2][0] +
                    J[1][1] * J[2][2] - J[1][2] * J[2][1];
  const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                     J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                     J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
  // Casimir null direction: deflate the small root, then solve the quadratic.
  double l0 = m2 != 0.0 ? det / m2 : 0.0;
  for (int it = 0; it < 3; ++it) {
    const double p = ((l0 - tr) * l0 + m2) * l0 - det;
    const double dp = (3.0 * l0 - 2.0 * tr) * l0 + m2;
    if (dp == 0.0) break;
    l0 -= p / dp;
  }
  const double sum = tr - l0;
  const double prod = m2 - l0 * sum;
  const std::complex<double> root = std::sqrt(std::complex<double>(sum * sum / 4.0 - prod, 0.0));
  lin.eigenvalues = {std::complex<double>(l0, 0.0), sum / 2.0 + root, sum / 2.0 - root};
  return lin;
}

Linearization jacobian(const ReducedSystemSpec& spec, const CriticalPoint& p) {
  if (p.kind != Kind::Equilibrium) raise(ErrorCode::NotAnEquilibrium, p.label + " is a singularity");
  return jacobian(spec, p.state());
}

std::optional<double> separatrix_energy(double G, double T) {
  if (!(G > 0.0)) raise(ErrorCode::InvalidArgument, "Gamma must be positive");
  if (T == 0.0) return std::nullopt;
  if (G == 1.0) return T < 0.0 ? 0.5 * std::log(-4.0 * T) : 0.5 * std::log(T / 2.0);
  if (T > 0.0 && !(G >= kSaddleNode || at_saddle_node(G))) return std::nullopt;
  const auto spec = ReducedSystemSpec::gamma_family(G);
  NambuState s;
  s.Theta = T;
  s.geometry = Geometry::Hyperboloid;
  if (T < 0.0) {
    s.X = T * G * (G - 1.0) / (G + 1.0);
    s.Y = kSqrt3 * G * T;
  } else {
    s.X = x_em1(G, T);
  }
  s.Z = hyper_z(s.X, s.Y, T);
  return reduction::reduced_hamiltonian(spec, s);
}

std::optional<double> rho_plus_closed(double G) {
  if (!(G > 0.0)) raise(ErrorCode::InvalidArgument, "Gamma must be positive");
  if (!(G >= kSaddleNode || at_saddle_node(G))) return std::nullopt;
  const double s = disc(G);
  const double xi = 4.0 * G * (G * G - 1.0) / (1.0 - 2.0 * G * G - s);
  const double zeta = std::sqrt(1.0 + xi * xi);
  const double A = zeta * (G * G + 1.0) + (1.0 - G * G) - 2.0 * G * xi;
  return std::pow(1.0 + G, 2.0 * G + 1.0) * std::pow((zeta + 1.0) / A, G) / (2.0 * (zeta + xi)) - 0.5;
}

CriticalRho critical_rho(double G) {
  CriticalRho out;
  out.rho_minus = -1.0;
  out.rho_plus = rho_plus_closed(G);
  const double E = scattering::asymptotic_reduced_energy(G);
  auto f = [&](double rho) { return *separatrix_energy(G, G * (1.0 + 2.0 * rho)) - E; };
  auto tol = boost::math::tools::eps_tolerance<double>(52);
  {
    double lo = -1e6, hi = -0.5 - 1e-9;
    if (f(lo) > 0.0 && f(hi) < 0.0) {
      auto r = boost::math::tools::bisect(f, lo, hi, tol);
      out.rho_minus_bisection = 0.5 * (r.first + r.second);
    }
  }
  if (out.rho_plus) {
    double lo = -0.5 + 1e-9, hi = 1e6;
    if (f(lo) < 0.0 && f(hi) > 0.0) {
      auto r = boost::math::tools::bisect(f, lo, hi, tol);
      out.rho_plus_bisection = 0.5 * (r.first + r.second);
    }
  }
  return out;
}

std::vector<BranchSample> bifurcation_sweep(double T, double gmin, double gmax, int steps) {
  if (!(gmin > 0.0) || !(gmax >= gmin) || steps < 1)
    raise(ErrorCode::InvalidArgument, "need 0 < gamma_min <= gamma_max and steps >= 1");
  if (T == 0.0) raise(ErrorCode::InvalidArgument, "Theta must be nonzero");
  std::vector<BranchSample> rows;
  static const char* labels[] = {"E_tri+", "E_tri-", "E_-1", "E_Gamma", "E_1", "S_1Gamma", "S_-1Gamma"};
  for (int i = 0; i < steps; ++i) {
    const double G = steps == 1 ? gmin : gmin + (gmax - gmin) * i / (steps - 1);
    std::vector<CriticalPoint> pts;
    if (G == 1.0) {
      pts = equilibria_11m1(T);
      for (auto& p : pts)
        if (p.label == "S_11") p.label = "S_1Gamma";
    } else {
      pts = equilibria_gamma(G, T);
    }
    for (int b = 0; b < 7; ++b) {
      BranchSample row;
      row.Gamma = G;
      row.label = labels[b];
      row.kind = labels[b][0] == 'S' ? Kind::Singularity : Kind::Equilibrium;
      switch (b) {
        case 0:
        case 1: row.X = T < 0.0 ? T * G * (G - 1.0) / (G + 1.0) : kNaN; break;
        case 2: row.X = G == 1.0 ? 0.0 : x_em1(G, T); break;
        case 3:
        case 4: row.X = G == 1.0 ? kNaN : x_eg(G, T); break;
        case 5: row.X = 0.0; break;
        case 6: row.X = G == 1.0 ? kNaN : x_sm1g(G, T); break;
      }
      for (const auto& p : pts)
        if (p.label == row.label) {
          row.exists = true;
          row.degenerate = p.degenerate;
          row.X = p.coords[0];
        }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace vortex::equilibria
