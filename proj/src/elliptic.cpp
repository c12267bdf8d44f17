#include "vortex/elliptic.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "vortex/errors.hpp"

namespace vortex::elliptic {

namespace {

constexpr double kDupTol = 1e-17;

void check_args(double x, double y, double z, const char* who) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || !std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
    raise(ErrorCode::DomainError, std::string(who) + ": arguments must be finite and nonnegative");
  const int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
  if (zeros > 1) raise(ErrorCode::DomainError, std::string(who) + ": at most one argument may vanish");
}

// R_J for p > 0 by Carlson's duplication.
double rj_positive(double x, double y, double z, double p) {
  const double x0 = x, y0 = y, z0 = z;
  const double a0 = (x + y + z + 2.0 * p) / 5.0;
  const double delta = (p - x) * (p - y) * (p - z);
  const double q = std::pow(0.25 * kDupTol, -1.0 / 6.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z), std::abs(a0 - p)});
  double a = a0, fm = 1.0, sum = 0.0;
  while (fm * q >= std::abs(a)) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z), sp = std::sqrt(p);
    const double lam = sx * sy + sy * sz + sz * sx;
    const double d = (sp + sx) * (sp + sy) * (sp + sz);
    const double e = delta * fm * fm * fm / (d * d);
    sum += fm * carlson_rc(1.0, 1.0 + e) / d;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    p = 0.25 * (p + lam);
    a = 0.25 * (a + lam);
    fm *= 0.25;
  }
  const double X = fm * (a0 - x0) / a;
  const double Y = fm * (a0 - y0) / a;
  const double Z = fm * (a0 - z0) / a;
  const double P = -(X + Y + Z) / 2.0;
  const double E2 = X * Y + X * Z + Y * Z - 3.0 * P * P;
  const double E3 = X * Y * Z + 2.0 * E2 * P + 4.0 * P * P * P;
  const double E4 = (2.0 * X * Y * Z + E2 * P + 3.0 * P * P * P) * P;
  const double E5 = X * Y * Z * P * P;
  const double series = 1.0 - 3.0 * E2 / 14.0 + E3 / 6.0 + 9.0 * E2 * E2 / 88.0 - 3.0 * E4 / 22.0 -
                        9.0 * E2 * E3 / 52.0 + 3.0 * E5 / 26.0;
  return fm * series / (a * std::sqrt(a)) + 6.0 * sum;
}

}  // namespace

double carlson_rf(double x, double y, double z) {
  check_args(x, y, z, "carlson_rf");
  const double x0 = x, y0 = y;
  const double a0 = (x + y + z) / 3.0;
  const double q = std::pow(3.0 * kDupTol, -1.0 / 6.0) *
                   std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
  double a = a0, fm = 1.0;
  while (fm * q >= std::abs(a)) {
    const double sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
    const double lam = sx * sy + sy * sz + sz * sx;
    x = 0.25 * (x + lam);
    y = 0.25 * (y + lam);
    z = 0.25 * (z + lam);
    a = 0.25 * (a + lam);
    fm *= 0.25;
  }
  const double X = fm * (a0 - x0) / a;
  const double Y = fm * (a0 - y0) / a;
  const double Z = -X - Y;
  const double E2 = X * Y - Z * Z;
  const double E3 = X * Y * Z;
  return (1.0 - E2 / 10.0 + E3 / 14.0 + E2 * E2 / 24.0 - 3.0 * E2 * E3 / 44.0) / std::sqrt(a);
}

double carlson_rc(double x, double y) {
  if (x < 0.0 || y == 0.0 || !std::isfinite(x) || !std::isfinite(y))
    raise(ErrorCode::DomainError, "carlson_rc: need x >= 0 and y != 0");
  if (y < 0.0) return std::sqrt(x / (x - y)) * carlson_rc(x - y, -y);
  if (x == y) return 1.0 / std::sqrt(x);
  if (x == 0.0) return 0.5 * std::acos(-1.0) / std::sqrt(y);
  if (x < y) return std::atan(std::sqrt((y - x) / x)) / std::sqrt(y - x);
  return std::atanh(std::sqrt((x - y) / x)) / std::sqrt(x - y);
}

double carlson_rj(double x, double y, double z, double p) {
  check_args(x, y, z, "carlson_rj");
  if (p == 0.0 || !std::isfinite(p)) raise(ErrorCode::DomainError, "carlson_rj: p must be finite and nonzero");
  if (p > 0.0) return rj_positive(x, y, z, p);
  // Principal value: sort so that x <= y <= z and shift p to a positive value.
  double v[3] = {x, y, z};
  std::sort(v, v + 3);
  const double xt = v[0], yt = v[1], zt = v[2];
  const double a = 1.0 / (yt - p);
  const double b = a * (zt - yt) * (yt - xt);
  const double pt = yt + b;
  const double rho = xt * zt / yt;
  const double tau = p * pt / yt;
  const double rcx = carlson_rc(rho, tau);
  return a * (b * rj_positive(xt, yt, zt, pt) + 3.0 * (rcx - carlson_rf(xt, yt, zt)));
}

double ellint_k(double m) {
  if (!(m < 1.0)) raise(ErrorCode::DomainError, "ellint_k: need m < 1");
  return carlson_rf(0.0, 1.0 - m, 1.0);
}

double ellint_pi(double n, double m) {
  if (!(m < 1.0)) raise(ErrorCode::DomainError, "ellint_pi: need m < 1");
  if (n == 1.0) raise(ErrorCode::DomainError, "ellint_pi: n = 1 diverges");
  const double k = carlson_rf(0.0, 1.0 - m, 1.0);
  if (n == 0.0) return k;
  return k + n / 3.0 * carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n);
}

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::ComplexPair: return "ComplexPair";
    case Regime::RealReal: return "RealReal";
    case Regime::RealImag: return "RealImag";
    case Regime::ImagImag: return "ImagImag";
  }
  return "?";
}

QuarticFactorization p4_factor(double T) {
  if (!std::isfinite(T)) raise(ErrorCode::BoundaryTheta, "Theta must be finite");
  QuarticFactorization q{};
  q.degenerate = (T == -1.0 || T == 0.0 || T == 8.0);
  const double alpha = -T * T + 4.0 * T + 8.0;
  if (T < -1.0) {
    const double A = std::sqrt((T - 8.0) * T * T * T);
    q.regime = Regime::ComplexPair;
    q.a_sq = 0.5 * (A + alpha);
    q.b_sq = 0.5 * (A - alpha);
    q.Y_min = 0.0;
    return q;
  }
  const double s = 8.0 * std::sqrt(T + 1.0);
  if (T <= 0.0) {
    q.regime = Regime::RealReal;
    q.a_sq = alpha + s;
    q.b_sq = alpha - s;
  } else if (T <= 8.0) {
    q.regime = Regime::RealImag;
    q.a_sq = alpha + s;
    q.b_sq = s - alpha;
  } else {
    q.regime = Regime::ImagImag;
    q.a_sq = s - alpha;
    q.b_sq = -alpha - s;
  }
  q.Y_min = (q.regime == Regime::ImagImag) ? 0.0 : std::sqrt(std::max(q.a_sq, 0.0));
  return q;
}

void p4_expand(const QuarticFactorization& q, double& c1, double& c0) {
  switch (q.regime) {
    case Regime::ComplexPair:  // (u - (a+ib)^2)(u - (a-ib)^2)
      c1 = -2.0 * (q.a_sq - q.b_sq);
      c0 = (q.a_sq + q.b_sq) * (q.a_sq + q.b_sq);
      return;
    case Regime::RealReal:
      c1 = -(q.a_sq + q.b_sq);
      c0 = q.a_sq * q.b_sq;
      return;
    case Regime::RealImag:
      c1 = q.b_sq - q.a_sq;
      c0 = -q.a_sq * q.b_sq;
      return;
    case Regime::ImagImag:
      c1 = q.a_sq + q.b_sq;
      c0 = q.a_sq * q.b_sq;
      return;
  }
}

namespace {

void require_regular(double T) {
  if (T == -1.0 || T == 8.0 || T == 0.0 || !std::isfinite(T))
    raise(ErrorCode::BoundaryTheta, "Theta = " + std::to_string(T) + " is a regime boundary");
}

// Per-term data of the Legendre reduction of
//   I(c) = 1/2 int_{umin}^inf du / ((u + c) sqrt(u p4(u))).
struct TermData {
  double m;
  double kcoef;   // I = kcoef K(m) + picoef Pi(n, m)
  double picoef;
  double n;
  // Real-root regimes keep the Carlson arguments for the n -> 0 limit.
  double y = 0.0, z = 0.0, p = 0.0;
  bool carlson = false;
};

TermData term(double T, double c) {
  TermData d{};
  if (T < -1.0) {
    const double alpha = -T * T + 4.0 * T + 8.0;
    const double A = std::sqrt((T - 8.0) * T * T * T);
    const double g = 1.0 / std::sqrt(A);
    d.m = (A + alpha) / (2.0 * A);
    d.n = -(A - c) * (A - c) / (4.0 * A * c);
    d.kcoef = 0.5 * g * (-2.0 / (A - c));
    d.picoef = 0.5 * g * (A + c) / (c * (A - c));
    return d;
  }
  const double s = 8.0 * std::sqrt(T + 1.0);
  const double r1 = -T * T + 4.0 * T + 8.0 + s;
  const double r2 = -T * T + 4.0 * T + 8.0 - s;
  double umin;
  if (T < 0.0) {
    umin = r1;
    d.y = r1 - r2;
    d.z = r1;
  } else if (T < 8.0) {
    umin = r1;
    d.y = r1;
    d.z = r1 - r2;
  } else {
    umin = 0.0;
    d.y = -r2;
    d.z = -r1;
  }
  d.p = umin + c;
  d.carlson = true;
  d.m = 1.0 - d.y / d.z;
  d.n = 1.0 - d.p / d.z;
  const double w = std::pow(d.z, -1.5) / d.n;
  d.kcoef = -w;
  d.picoef = w;
  return d;
}

}  // namespace

ClosedFormTerms closed_form_terms(double T) {
  require_regular(T);
  const TermData t1 = term(T, T * T);
  const TermData t2 = term(T, T * T - 8.0 * T);
  const double w1 = -8.0 * T * T;
  const double w2 = 8.0 * (T * T - 8.0 * T);
  ClosedFormTerms out{};
  out.regime = p4_factor(T).regime;
  out.m = t1.m;
  out.n1 = t1.n;
  out.n2 = t2.n;
  out.c_K = w1 * t1.kcoef + w2 * t2.kcoef;
  out.c_Pi1 = w1 * t1.picoef;
  out.c_Pi2 = w2 * t2.picoef;
  return out;
}

double delta_alpha_closed(double T) {
  if (T == 0.0) return 0.0;
  require_regular(T);
  const TermData t1 = term(T, T * T);
  const TermData t2 = term(T, T * T - 8.0 * T);
  // A vanishing characteristic makes the K/Pi split singular; the Carlson
  // form is the same quantity without the cancellation.
  auto value = [](const TermData& d) {
    if (d.carlson && std::abs(d.n) < 1e-6) return carlson_rj(0.0, d.y, d.z, d.p) / 3.0;
    return d.kcoef * ellint_k(d.m) + d.picoef * ellint_pi(d.n, d.m);
  };
  return -8.0 * T * T * value(t1) + 8.0 * (T * T - 8.0 * T) * value(t2);
}

double delta_alpha_quadrature(double T) {
  require_regular(T);
  const QuarticFactorization q = p4_factor(T);
  const double c1 = T * T, c2 = T * T - 8.0 * T;
  const double lin = 2.0 * (T * T - 4.0 * T - 8.0);
  const double con = (T - 8.0) * T * T * T;
  const double w1 = -8.0 * T * T, w2 = 8.0 * c2;

  std::function<double(double)> f;
  if (q.regime == Regime::RealReal || q.regime == Regime::RealImag) {
    // Y^2 = a^2 + s^2 removes the inverse square root at Y = a:
    // p4 = s^2 (s^2 + a^2 - other root).
    const double a2 = q.a_sq;
    const double other = (q.regime == Regime::RealReal) ? q.b_sq : -q.b_sq;
    f = [=](double s) {
      const double y2 = a2 + s * s;
      const double rest = std::sqrt(s * s + a2 - other);
      return (w1 / (y2 + c1) + w2 / (y2 + c2)) / (std::sqrt(y2) * rest);
    };
  } else {
    f = [=](double Y) {
      const double y2 = Y * Y;
      const double p4 = y2 * y2 + lin * y2 + con;
      return (w1 / (y2 + c1) + w2 / (y2 + c2)) / std::sqrt(p4);
    };
  }
  boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0, l1 = 0.0;
  double v;
  const double alpha = -T * T + 4.0 * T + 8.0;
  if (q.regime == Regime::ComplexPair && alpha > 0.0) {
    // The complex root pair pinches the real axis near u = alpha as Theta -> -1.
    const double split = std::sqrt(alpha);
    double e1 = 0.0, e2 = 0.0, l1a = 0.0, l1b = 0.0;
    v = integrator.integrate(f, 0.0, split, 1e-14, &e1, &l1a) +
        integrator.integrate(f, split, std::numeric_limits<double>::infinity(), 1e-14, &e2, &l1b);
    err = e1 + e2;
    l1 = l1a + l1b;
  } else {
    v = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-14, &err, &l1);
  }
  if (!std::isfinite(v) || err > 1e-9 * std::max(1.0, l1))
    raise(ErrorCode::QuadratureNonConvergence,
          "Theta = " + std::to_string(T) + ", error estimate " + std::to_string(err));
  return v;
}

}  // namespace vortex::elliptic
