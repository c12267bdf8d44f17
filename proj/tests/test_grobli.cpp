#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "vortex/core.hpp"
#include "vortex/grobli.hpp"
#include "vortex/integrate.hpp"

using namespace vortex;
using namespace vortex::grobli;

namespace {

VortexState equilateral(std::vector<double> g) {
  const double h = std::sqrt(3.0) / 2.0;
  return {{{0.0, 0.0}, {1.0, 0.0}, {0.5, h}}, std::move(g)};
}

std::array<double, 3> arr(const std::vector<double>& g) { return {g[0], g[1], g[2]}; }

}  // namespace

TEST_CASE("heron area") {
  CHECK(heron_area({1.0, 1.0, 1.0, 1}) == doctest::Approx(std::sqrt(3.0) / 4.0));
  CHECK(heron_area({1.0, 1.0, 4.0, 1}) == 0.0);
  CHECK(heron_area({1.0, 1.0, 2.0, 1}) == doctest::Approx(0.5));
  CHECK_ERROR_CODE(heron_area({1.0, 1.0, 9.0, 1}), ErrorCode::InvalidTriangle);
}

TEST_CASE("orientation") {
  auto ccw = from_state(equilateral({1, 1, 1}));
  CHECK(ccw.sigma == -1);
  VortexState cw{{{0.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}, {1.0, 0.0}}, {1, 1, 1}};
  CHECK(from_state(cw).sigma == 1);
}

TEST_CASE("equilateral and collinear states are stationary") {
  for (auto g : {std::array<double, 3>{1, 1, 1}, {2.0, 0.5, -1.3}}) {
    auto d = grobli_rhs(from_state(equilateral({g[0], g[1], g[2]})), g);
    for (double v : d) CHECK(std::abs(v) < 1e-15);
  }
  VortexState line{{{0.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}}, {1, 2, -1}};
  auto d = grobli_rhs(from_state(line), {1, 2, -1});
  for (double v : d) CHECK(v == 0.0);
  CHECK_ERROR_CODE(grobli_rhs({0.0, 1.0, 1.0, 1}, {1, 1, 1}), ErrorCode::ZeroSide);
}

TEST_CASE("distance system matches the chain rule of the full flow") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> g{u(rng), u(rng), u(rng)};
    auto s = testutil::random_state(rng, g);
    auto v = core::rhs(s);
    auto ddt = [&](int i, int j) {
      const auto &a = s.positions[i], &b = s.positions[j];
      return 2.0 * ((a[0] - b[0]) * (v[i][0] - v[j][0]) + (a[1] - b[1]) * (v[i][1] - v[j][1]));
    };
    auto d = grobli_rhs(from_state(s), arr(g));
    const double scale = std::max({1.0, std::abs(ddt(1, 2)), std::abs(ddt(2, 0)), std::abs(ddt(0, 1))});
    CHECK(std::abs(d[0] - ddt(1, 2)) <= 1e-10 * scale);
    CHECK(std::abs(d[1] - ddt(2, 0)) <= 1e-10 * scale);
    CHECK(std::abs(d[2] - ddt(0, 1)) <= 1e-10 * scale);
  }
}

TEST_CASE("distance system matches finite differences along a trajectory") {
  std::mt19937_64 rng(32);
  std::vector<double> g{1.0, 1.0, -1.0};
  auto s = testutil::random_state(rng, g, 1.0);
  integrate::Options o;
  o.t_end = 3.0;
  o.keep_dense = true;
  o.rtol = 1e-12;
  o.atol = 1e-14;
  auto tr = integrate::integrate(
      [&](double, const double* y, double* dy) { core::rhs_flat(g.data(), 3, y, dy); }, s.flat(), o);
  const double h = 1e-4;
  for (double t = 0.3; t < 2.7; t += 0.4) {
    auto tsq = [&](double tt) { return from_state(VortexState::from_flat(tr.at(tt).data(), g)); };
    const auto p = tsq(t + h), m = tsq(t - h), c = tsq(t);
    auto d = grobli_rhs(c, {1, 1, -1});
    CHECK(std::abs(d[0] - (p.l23sq - m.l23sq) / (2 * h)) < 1e-6);
    CHECK(std::abs(d[1] - (p.l31sq - m.l31sq) / (2 * h)) < 1e-6);
    CHECK(std::abs(d[2] - (p.l12sq - m.l12sq) / (2 * h)) < 1e-6);
  }
}

TEST_CASE("invariant") {
  CHECK(grobli_invariant(from_state(equilateral({1, 1, 1})), {1, 1, 1}) == doctest::Approx(1.0));
  CHECK_ERROR_CODE(grobli_invariant({1, 1, 1, 1}, {1, 0, 1}), ErrorCode::ZeroCirculationProduct);

  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 50; ++k) {
    std::vector<double> g{u(rng), u(rng), u(rng)};
    auto s = testutil::random_state(rng, g);
    auto c = core::conserved(s);
    const double total = g[0] + g[1] + g[2];
    const double L = grobli_invariant(from_state(s), arr(g));
    const double rhs = total * c.Theta - (c.M[0] * c.M[0] + c.M[1] * c.M[1]);
    CHECK(3.0 * L * g[0] * g[1] * g[2] == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("invariant is conserved along the scattering setup") {
  std::vector<double> g{1.0, 1.0, -1.0};
  const double Lx = 20.0;
  VortexState s{{{-Lx, 2.5}, {0.0, -1.0}, {-Lx, 1.5}}, g};
  integrate::Options o;
  o.t_end = 2 * Lx;
  auto tr = integrate::integrate(
      [&](double, const double* y, double* dy) { core::rhs_flat(g.data(), 3, y, dy); }, s.flat(), o);
  const double L0 = grobli_invariant(from_state(s), {1, 1, -1});
  double scale = 0.0;
  for (const auto& r : s.positions) scale += r[0] * r[0] + r[1] * r[1];
  double worst = 0.0;
  for (const auto& y : tr.y) {
    const auto st = VortexState::from_flat(y.data(), g);
    worst = std::max(worst, std::abs(grobli_invariant(from_state(st), {1, 1, -1}) - L0));
    auto b = trilinear(from_state(st), {1, 1, -1}, L0);
    CHECK(b.b1 + b.b2 + b.b3 == doctest::Approx(3.0).epsilon(1e-10));
  }
  CHECK(worst / std::max(1.0, scale) <= 1e-8);
}

TEST_CASE("trilinear coordinates") {
  auto b = trilinear(from_state(equilateral({1, 1, 1})), {1, 1, 1}, 1.0);
  CHECK(b.b1 == doctest::Approx(1.0));
  CHECK(b.b2 == doctest::Approx(1.0));
  CHECK(b.b3 == doctest::Approx(1.0));

  // right angle at vortex 3 makes L vanish for (1, 1, -1)
  VortexState z{{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}, {1, 1, -1}};
  auto ts = from_state(z);
  CHECK(grobli_invariant(ts, {1, 1, -1}) == doctest::Approx(0.0));
  auto u = trilinear(ts, {1, 1, -1}, 0.0);
  CHECK(std::abs(u.b1 + u.b2 + u.b3) < 1e-10);

  CHECK_ERROR_CODE(trilinear(ts, {1, 0, -1}, 1.0), ErrorCode::ZeroDenominator);

  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> uu(-1.5, 1.5);
  for (int k = 0; k < 100; ++k) {
    std::vector<double> g{uu(rng), uu(rng), uu(rng)};
    auto s = testutil::random_state(rng, g);
    auto t = from_state(s);
    const double L = grobli_invariant(t, arr(g));
    if (std::abs(L) < 1e-3) continue;
    auto p = trilinear(t, arr(g), L);
    CHECK(p.b1 + p.b2 + p.b3 == doctest::Approx(3.0).epsilon(1e-10));
  }
}
