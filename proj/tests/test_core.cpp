#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "vortex/core.hpp"

using namespace vortex;
using testutil::random_state;

TEST_CASE("dipole translates rigidly") {
  VortexState s{{{0.0, 0.5}, {0.0, -0.5}}, {1.0, -1.0}};
  auto v = core::rhs(s);
  CHECK(v[0][0] == doctest::Approx(1.0));
  CHECK(v[0][1] == doctest::Approx(0.0));
  CHECK(v[1][0] == v[0][0]);
  CHECK(v[1][1] == v[0][1]);
}

TEST_CASE("co-rotating pair") {
  VortexState s{{{0.5, 0.0}, {-0.5, 0.0}}, {1.0, 1.0}};
  auto v = core::rhs(s);
  CHECK(v[0][0] == doctest::Approx(-v[1][0]));
  CHECK(v[0][1] == doctest::Approx(-v[1][1]));
  CHECK(v[0][0] * 0.5 + v[0][1] * 0.0 == doctest::Approx(0.0));
  CHECK(std::hypot(v[0][0], v[0][1]) == doctest::Approx(1.0));
}

TEST_CASE("equilateral triangle rotates rigidly") {
  VortexState s;
  s.circulations = {1.0, 1.0, 1.0};
  const double R = 1.0 / std::sqrt(3.0);
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0 + 0.3;
    s.positions.push_back({R * std::cos(a), R * std::sin(a)});
  }
  auto v = core::rhs(s);
  const double sp = std::hypot(v[0][0], v[0][1]);
  for (int k = 0; k < 3; ++k) {
    CHECK(std::hypot(v[k][0], v[k][1]) == doctest::Approx(sp).epsilon(1e-13));
    CHECK(std::abs(v[k][0] * s.positions[k][0] + v[k][1] * s.positions[k][1]) < 1e-13);
  }
  CHECK(core::hamiltonian(s) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("hamiltonian values") {
  VortexState pair{{{0.0, 0.0}, {1.0, 0.0}}, {1.0, 1.0}};
  CHECK(core::hamiltonian(pair) == 0.0);
  VortexState s{{{-10.0, 0.5}, {0.0, -1.0}, {-10.0, -0.5}}, {1.0, 1.0, -1.0}};
  // 30-digit evaluation of the three log terms
  CHECK(core::hamiltonian(s) == doctest::Approx(-0.00987686436811627993).epsilon(1e-14));
}

TEST_CASE("conserved quantities") {
  VortexState s{{{1.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}, {1.0, 1.0, -1.0}};
  auto c = core::conserved(s);
  CHECK(c.Theta == doctest::Approx(-2.0));
  REQUIRE(c.r0.has_value());
  CHECK(c.r0->at(0) == doctest::Approx(c.M[0] / 1.0));

  VortexState dip{{{0.0, 0.5}, {0.0, -0.5}}, {1.0, -1.0}};
  CHECK_FALSE(core::conserved(dip).r0.has_value());

  for (double L : {20.0, 100.0, 1000.0})
    for (double rho : {-2.0, 0.0, 1.5, 3.0}) {
      VortexState sc{{{-L, rho + 0.5}, {0.0, -1.0}, {-L, rho - 0.5}}, {1.0, 1.0, -1.0}};
      auto cc = core::conserved(sc);
      CHECK(cc.M[0] == 0.0);
      CHECK(cc.M[1] == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(cc.Theta == doctest::Approx(1.0 + 2.0 * rho).epsilon(1e-9));
    }
}

TEST_CASE("coincident vortices raise") {
  VortexState s{{{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}, {1.0, 1.0, 1.0}};
  CHECK_ERROR_CODE(core::rhs(s), ErrorCode::CoincidentVortices);
  CHECK_ERROR_CODE(core::hamiltonian(s), ErrorCode::CoincidentVortices);
  VortexState bad{{{0.0, 0.0}}, {1.0}};
  CHECK_ERROR_CODE(core::rhs(bad), ErrorCode::InvalidArgument);
}

TEST_CASE("rhs equivariance under translation and rotation") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_state(rng, {u(rng) + 1.5, u(rng) - 1.5, u(rng), u(rng) + 2.0});
    auto v = core::rhs(s);
    const double tx = 5 * u(rng), ty = 5 * u(rng), a = 3 * u(rng);
    const double c = std::cos(a), sn = std::sin(a);
    VortexState t = s, r = s;
    for (std::size_t i = 0; i < s.size(); ++i) {
      t.positions[i] = {s.positions[i][0] + tx, s.positions[i][1] + ty};
      r.positions[i] = {c * s.positions[i][0] - sn * s.positions[i][1],
                        sn * s.positions[i][0] + c * s.positions[i][1]};
    }
    auto vt = core::rhs(t), vr = core::rhs(r);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(std::abs(vt[i][0] - v[i][0]) < 1e-12);
      CHECK(std::abs(vt[i][1] - v[i][1]) < 1e-12);
      CHECK(std::abs(vr[i][0] - (c * v[i][0] - sn * v[i][1])) < 1e-12);
      CHECK(std::abs(vr[i][1] - (sn * v[i][0] + c * v[i][1])) < 1e-12);
    }
  }
}

TEST_CASE("flow preserves H and Theta to first order") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_state(rng, {u(rng), u(rng), u(rng)});
    auto v = core::rhs(s);
    auto gH = core::hamiltonian_gradient(s);
    double dH = 0.0, dT = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      dH += gH[i][0] * v[i][0] + gH[i][1] * v[i][1];
      scale += std::abs(gH[i][0] * v[i][0]) + std::abs(gH[i][1] * v[i][1]);
      dT += 2.0 * s.circulations[i] * (s.positions[i][0] * v[i][0] + s.positions[i][1] * v[i][1]);
    }
    CHECK(std::abs(dH) <= 1e-10 * std::max(1.0, scale));
    CHECK(std::abs(dT) <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(13);
  auto s = random_state(rng, {1.0, 0.7, -1.2});
  auto g = core::hamiltonian_gradient(s);
  const double h = 1e-6;
  for (std::size_t i = 0; i < 3; ++i)
    for (int c = 0; c < 2; ++c) {
      auto p = s, m = s;
      p.positions[i][c] += h;
      m.positions[i][c] -= h;
      const double fd = (core::hamiltonian(p) - core::hamiltonian(m)) / (2 * h);
      CHECK(fd == doctest::Approx(g[i][c]).epsilon(1e-7));
    }
}
