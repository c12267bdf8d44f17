#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "helpers.hpp"
#include "vortex/core.hpp"
#include "vortex/reduction.hpp"

using namespace vortex;
using namespace vortex::reduction;
namespace vi = vortex::integrate;

namespace {

std::vector<double> vec(const std::array<double, 3>& g) { return {g[0], g[1], g[2]}; }

double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }

VortexState dipole_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    VortexState s{{a, b, {a[0] + b[0], a[1] + b[1]}}, {1.0, 1.0, -1.0}};
    if (core::min_pair_distance(s) > 0.2) return s;
  }
}

vi::Rhs full_rhs(std::vector<double> g) {
  return [g](double, const double* y, double* dy) { core::rhs_flat(g.data(), g.size(), y, dy); };
}

}  // namespace

TEST_CASE("virtual circulations") {
  auto k = [](std::vector<double> g) {
    VortexState s{{{0, 0}, {1, 0}, {0, 1}}, g};
    return to_jacobi(s);
  };
  auto a = k({1, 1, 1});
  CHECK(a.kappa1 == doctest::Approx(0.5));
  CHECK(a.kappa2 == doctest::Approx(2.0 / 3.0));
  CHECK(a.kappa3 == doctest::Approx(3.0));
  auto b = k({1, 1, -1});
  CHECK(b.kappa1 == doctest::Approx(0.5));
  CHECK(b.kappa2 == doctest::Approx(-2.0));
  CHECK(b.kappa3 == doctest::Approx(1.0));
  auto c = k({1, 2, -1});
  CHECK(c.kappa1 == doctest::Approx(2.0 / 3.0));
  CHECK(c.kappa2 == doctest::Approx(-1.5));
  CHECK(c.kappa3 == doctest::Approx(2.0));
  CHECK_ERROR_CODE(k({1, -1, 2}), ErrorCode::DegenerateCirculationSum);
  CHECK_ERROR_CODE(k({1, 1, -2}), ErrorCode::DegenerateCirculationSum);
}

TEST_CASE("Jacobi round trip") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 100; ++k) {
    std::array<double, 3> g{std::abs(u(rng)) + 0.2, std::abs(u(rng)) + 0.2, u(rng)};
    if (std::abs(g[0] + g[1] + g[2]) < 0.1) continue;
    auto s = testutil::random_state(rng, vec(g));
    auto back = from_jacobi(to_jacobi(s), g);
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 2; ++c) CHECK(std::abs(back.positions[i][c] - s.positions[i][c]) < 1e-12);
  }
  JacobiFrame f;
  f.R1 = {0.0, 0.0};
  f.R2 = {0.7, -0.3};
  auto s = from_jacobi(f, {1, 1, -1});
  CHECK(s.positions[0][0] == s.positions[1][0]);
  CHECK(s.positions[0][1] == s.positions[1][1]);
  f.R1 = {0.4, 0.9};
  f.R2 = {0.0, 0.0};
  s = from_jacobi(f, {1, 1, -1});
  CHECK(s.positions[2][0] == doctest::Approx((s.positions[0][0] + s.positions[1][0]) / 2));
  CHECK(s.positions[2][1] == doctest::Approx((s.positions[0][1] + s.positions[1][1]) / 2));
}

TEST_CASE("geometry identity and collinearity") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 100; ++k) {
    std::array<double, 3> g{std::abs(u(rng)) + 0.2, std::abs(u(rng)) + 0.2, u(rng)};
    if (std::abs(g[0] + g[1] + g[2]) < 0.1) continue;
    auto s = testutil::random_state(rng, vec(g));
    auto n = reduce(s);
    CHECK(n.geometry == (to_jacobi(s).kappa2 > 0 ? Geometry::Sphere : Geometry::Hyperboloid));
    CHECK(std::abs(casimir_residual(n)) <= 1e-10 * std::max(1.0, n.Z * n.Z));
    if (n.geometry == Geometry::Hyperboloid) CHECK(n.Z >= 0.0);
    CHECK(std::abs(n.Y) > 0.0);

    // collinear: put all three on a random line
    const double a = u(rng), ox = u(rng), oy = u(rng);
    VortexState line = s;
    for (int i = 0; i < 3; ++i) {
      const double tpar = u(rng) * 2.0;
      line.positions[i] = {ox + tpar * std::cos(a), oy + tpar * std::sin(a)};
    }
    CHECK(std::abs(reduce(line).Y) <= 1e-12);
  }
}

TEST_CASE("parallelogram identities for (1, 1, -1)") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 100; ++k) {
    auto s = dipole_state(rng);
    const auto &v1 = s.positions[0], &v2 = s.positions[1];
    const double n1 = v1[0] * v1[0] + v1[1] * v1[1], n2 = v2[0] * v2[0] + v2[1] * v2[1];
    auto n = reduce(s);
    CHECK(n.X == doctest::Approx(-n1 + n2).epsilon(1e-12));
    CHECK(n.Z == doctest::Approx(n1 + n2).epsilon(1e-12));
    CHECK(n.Y == doctest::Approx(2.0 * cross(v1, v2)).epsilon(1e-12));
    CHECK(std::abs(n.Theta - (-2.0 * (v1[0] * v2[0] + v1[1] * v2[1]))) < 1e-10);
    CHECK(n.Theta == doctest::Approx(core::conserved(s).Theta).epsilon(1e-12));
  }
}

TEST_CASE("identical vortices: equilateral triangle sits at a pole") {
  VortexState s;
  s.circulations = {1, 1, 1};
  for (int k = 0; k < 3; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 3.0 + 0.4;
    s.positions.push_back({std::cos(a), std::sin(a)});
  }
  auto n = reduce(s);
  CHECK(std::abs(n.X) < 1e-12);
  CHECK(std::abs(n.Z) < 1e-12);
  CHECK(std::abs(n.Y) == doctest::Approx(n.Theta));

  vi::Options o;
  o.t_end = 5.0;
  auto tr = vi::integrate(full_rhs(s.circulations), s.flat(), o);
  for (const auto& m : map_trajectory(tr, {1, 1, 1})) {
    CHECK(std::abs(m.X) < 1e-9);
    CHECK(std::abs(m.Z) < 1e-9);
  }
}

TEST_CASE("reduced Hamiltonians equal the lab energy up to the declared offset") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 100; ++k) {
    std::array<double, 3> g{std::abs(u(rng)) + 0.2, std::abs(u(rng)) + 0.2, u(rng)};
    if (std::abs(g[0] + g[1] + g[2]) < 0.1 || std::abs(g[2]) < 0.05) continue;
    auto s = testutil::random_state(rng, vec(g));
    CHECK(reduced_hamiltonian(ReducedSystemSpec::general(g), reduce(s)) ==
          doctest::Approx(core::hamiltonian(s)).epsilon(1e-11));
  }
  for (double G : {0.4, 0.9, 1.0, 1.7, 2.0}) {
    auto spec = ReducedSystemSpec::gamma_family(G);
    for (int k = 0; k < 20; ++k) {
      auto s = testutil::random_state(rng, {1.0, G, -1.0});
      CHECK(reduced_hamiltonian(spec, reduce(s)) + spec.offset ==
            doctest::Approx(core::hamiltonian(s)).epsilon(1e-11));
    }
  }
  auto id = ReducedSystemSpec::identical();
  for (int k = 0; k < 20; ++k) {
    auto s = testutil::random_state(rng, {1, 1, 1});
    CHECK(reduced_hamiltonian(id, reduce(s)) + id.offset == doctest::Approx(core::hamiltonian(s)).epsilon(1e-11));
  }
  CHECK(ReducedSystemSpec::dipole().offset == doctest::Approx(-std::log(2.0)));
  CHECK(ReducedSystemSpec::gamma_family(1.0).selector == Selector::Specialized11m1);
}

TEST_CASE("dipole energies at equilibria") {
  auto spec = ReducedSystemSpec::dipole();
  for (double T : {0.5, 1.0, 8.0}) {
    NambuState e{0.0, 0.0, T, T, Geometry::Hyperboloid};
    CHECK(reduced_hamiltonian(spec, e) == doctest::Approx(0.5 * std::log(T / 2)));
    for (double v : nambu_rhs(spec, e)) CHECK(std::abs(v) < 1e-14);
  }
  for (double T : {-0.5, -1.0, -3.0}) {
    for (double sg : {1.0, -1.0}) {
      NambuState e{0.0, sg * std::sqrt(3.0) * T, -2.0 * T, T, Geometry::Hyperboloid};
      CHECK(reduced_hamiltonian(spec, e) == doctest::Approx(0.5 * std::log(-4 * T)));
      for (double v : nambu_rhs(spec, e)) CHECK(std::abs(v) < 1e-14);
    }
  }
  NambuState tri{0.0, std::sqrt(3.0) * -1.0, 2.0, -1.0, Geometry::Hyperboloid};
  CHECK(reduced_hamiltonian(spec, tri) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("singular states name the colliding pair") {
  auto spec = ReducedSystemSpec::dipole();
  NambuState s11{0.0, 0.0, 1.0, -1.0, Geometry::Hyperboloid};
  try {
    reduced_hamiltonian(spec, s11);
    FAIL("expected SingularState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularState);
    CHECK(std::string(e.what()).find("pair 12") != std::string::npos);
  }
  NambuState s13{-2.0, 0.0, 2.0, 0.0, Geometry::Hyperboloid};
  try {
    reduced_hamiltonian(spec, s13);
    FAIL("expected SingularState");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("pair 13") != std::string::npos);
  }
  CHECK_ERROR_CODE(nambu_rhs(spec, s11), ErrorCode::SingularState);
}

TEST_CASE("vector field is tangent to Casimir and energy levels") {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 100; ++k) {
    std::array<double, 3> g{std::abs(u(rng)) + 0.2, std::abs(u(rng)) + 0.2, u(rng)};
    if (std::abs(g[0] + g[1] + g[2]) < 0.1 || std::abs(g[2]) < 0.05) continue;
    auto spec = ReducedSystemSpec::general(g);
    auto n = reduce(testutil::random_state(rng, vec(g)));
    auto f = nambu_rhs(spec, n);
    auto h = hamiltonian_gradient(spec, n);
    const double zc = n.geometry == Geometry::Sphere ? n.Z : -n.Z;
    const double fs = std::abs(f[0]) + std::abs(f[1]) + std::abs(f[2]);
    const double hs = std::abs(h[0]) + std::abs(h[2]);
    const double cs = std::abs(n.X) + std::abs(n.Y) + std::abs(n.Z);
    CHECK(std::abs(f[0] * n.X + f[1] * n.Y + f[2] * zc) <= 1e-12 * std::max(1.0, fs * cs));
    CHECK(std::abs(f[0] * h[0] + f[2] * h[2]) <= 1e-12 * std::max(1.0, fs * hs));
  }
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(46);
  for (auto spec : {ReducedSystemSpec::general({1.3, 0.8, 0.5}), ReducedSystemSpec::general({1.3, 0.8, -0.5}),
                    ReducedSystemSpec::identical(), ReducedSystemSpec::dipole(),
                    ReducedSystemSpec::gamma_family(1.7)}) {
    auto n = reduce(testutil::random_state(rng, vec(spec.gammas)));
    auto g = hamiltonian_gradient(spec, n);
    const double h = 1e-6;
    auto at = [&](double dx, double dz) {
      NambuState m = n;
      m.X += dx;
      m.Z += dz;
      return reduced_hamiltonian(spec, m);
    };
    CHECK(g[0] == doctest::Approx((at(h, 0) - at(-h, 0)) / (2 * h)).epsilon(1e-6));
    CHECK(g[2] == doctest::Approx((at(0, h) - at(0, -h)) / (2 * h)).epsilon(1e-6));
    CHECK(g[1] == 0.0);
  }
}

TEST_CASE("hand-simplified fields agree with the cross product") {
  std::mt19937_64 rng(47);
  for (double G : {1.0, 0.4, 0.9, 1.7, 2.0}) {
    auto spec = ReducedSystemSpec::gamma_family(G);
    for (int k = 0; k < 100; ++k) {
      auto n = reduce(testutil::random_state(rng, {1.0, G, -1.0}));
      auto a = nambu_rhs(spec, n), b = nambu_rhs_closed(spec, n);
      const double sc = std::max({1.0, std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
      for (int i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10 * sc);
    }
  }
}

TEST_CASE("heading and angle rates") {
  NambuState y0{1.3, 0.0, 2.0, 0.7, Geometry::Hyperboloid};
  CHECK(alpha_rate(y0) == 0.0);
  CHECK(theta2_rate(y0) == doctest::Approx(-2.0 / 0.7));
  NambuState t0{0.4, 0.9, 1.0, 0.0, Geometry::Hyperboloid};
  CHECK(alpha_rate(t0) == 0.0);
  NambuState x0{0.0, 0.9, 1.2, 0.5, Geometry::Hyperboloid};
  CHECK(theta2_rate(x0) == doctest::Approx(2.0 / std::sqrt(0.25 + 0.81)));
  CHECK_ERROR_CODE(alpha_rate({0.0, 0.0, 1.0, 1.0, Geometry::Hyperboloid}), ErrorCode::DegenerateDenominator);

  // against the lab frame: heading of vortex 3 and polar angle of vortex 3
  std::mt19937_64 rng(48);
  std::vector<double> g{1, 1, -1};
  for (int k = 0; k < 10; ++k) {
    auto s = dipole_state(rng);
    vi::Options o;
    o.t_end = 1.0;
    o.keep_dense = true;
    o.rtol = 1e-12;
    o.atol = 1e-14;
    auto tr = vi::integrate(full_rhs(g), s.flat(), o);
    const double h = 1e-4, t = 0.5;
    auto heading = [&](double tt) {
      auto y = tr.at(tt);
      std::vector<double> v(6);
      core::rhs_flat(g.data(), 3, y.data(), v.data());
      return std::atan2(v[5], v[4]);
    };
    auto polar = [&](double tt) {
      auto y = tr.at(tt);
      return std::atan2(y[5], y[4]);
    };
    auto wrap = [](double d) { return std::remainder(d, 2.0 * std::numbers::pi); };
    const auto n = reduce(VortexState::from_flat(tr.at(t).data(), g));
    const double fa = wrap(heading(t + h) - heading(t - h)) / (2 * h);
    const double fp = wrap(polar(t + h) - polar(t - h)) / (2 * h);
    CHECK(std::abs(alpha_rate(n) - fa) <= 1e-6 * std::max(1.0, std::abs(fa)));
    CHECK(std::abs(theta2_rate(n) - fp) <= 1e-6 * std::max(1.0, std::abs(fp)));
  }
}

TEST_CASE("canonical relabeling") {
  auto r = canonical_order({-1.0, 1.0, 2.0});
  CHECK_FALSE(r.time_reversed);
  CHECK(r.gammas == std::array<double, 3>{2.0, 1.0, -1.0});
  CHECK(r.order == std::array<int, 3>{2, 1, 0});
  auto t = canonical_order({-1.0, -2.0, 0.5});
  CHECK(t.time_reversed);
  CHECK(t.gammas == std::array<double, 3>{2.0, 1.0, -0.5});
  CHECK(t.order == std::array<int, 3>{1, 0, 2});
  CHECK_ERROR_CODE(canonical_order({1.0, 0.0, 1.0}), ErrorCode::InvalidArgument);
}

TEST_CASE("scattering trajectory maps onto the hyperboloid") {
  const double L = 20.0;
  VortexState s{{{-L, 3.0}, {0.0, -1.0}, {-L, 2.0}}, {1.0, 1.0, -1.0}};
  vi::Options o;
  o.t_end = 2 * L;
  auto tr = vi::integrate(full_rhs(s.circulations), s.flat(), o);
  auto mapped = map_trajectory(tr, {1, 1, -1});
  for (const auto& m : mapped) CHECK(std::abs(casimir_residual(m)) <= 1e-8 * std::max(1.0, m.Z * m.Z));

  vi::Options ro;
  ro.t_end = 2 * L;
  ro.sample_times = tr.t;
  auto rt = integrate_reduced(ReducedSystemSpec::dipole(), mapped.front(), ro, false, true);
  REQUIRE(rt.t.size() == tr.t.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < rt.t.size(); ++k) {
    const auto& m = mapped[k];
    const double sc = std::max(1.0, m.Z);
    worst = std::max({worst, std::abs(rt.y[k][0] - m.X) / sc, std::abs(rt.y[k][1] - m.Y) / sc,
                      std::abs(rt.y[k][2] - m.Z) / sc});
  }
  CHECK(worst <= 1e-6);
  for (const auto& d : rt.drifts) CHECK_MESSAGE(d.ok(), d.name);
}

TEST_CASE("two-route equivalence across circulation families") {
  std::mt19937_64 rng(49);
  struct Family {
    std::array<double, 3> g;
    ReducedSystemSpec spec;
    bool closed;
  };
  std::vector<Family> fams{
      {{1, 1, -1}, ReducedSystemSpec::dipole(), true},
      {{1, 1.7, -1}, ReducedSystemSpec::gamma_family(1.7), true},
      {{1, 0.6, -1}, ReducedSystemSpec::gamma_family(0.6), true},
      {{1, 1, 1}, ReducedSystemSpec::identical(), false},
      {{1.5, 1.0, 0.6}, ReducedSystemSpec::general({1.5, 1.0, 0.6}), false},
      {{1.5, 1.0, -0.7}, ReducedSystemSpec::general({1.5, 1.0, -0.7}), false},
  };
  const double T = 3.0;
  for (const auto& f : fams) {
    int done = 0;
    while (done < 10) {
      auto s = testutil::random_state(rng, vec(f.g), 1.5);
      if (core::min_pair_distance(s) < 0.5) continue;
      std::vector<double> times;
      for (int k = -30; k <= 30; ++k) times.push_back(T * k / 30.0);
      vi::Options fwd, bwd;
      fwd.t_end = T;
      bwd.t_end = -T;
      fwd.sample_times = bwd.sample_times = {};
      for (double t : times) (t > 0 ? fwd : bwd).sample_times.push_back(t);
      std::reverse(bwd.sample_times.begin(), bwd.sample_times.end());
      const auto n0 = reduce(s);
      for (auto* o : {&fwd, &bwd}) {
        vi::Trajectory full, red;
        try {
          full = vi::integrate(full_rhs(vec(f.g)), s.flat(), *o);
          red = integrate_reduced(f.spec, n0, *o, false, f.closed);
        } catch (const Error&) {
          continue;  // close encounter; draw another state
        }
        auto mapped = map_trajectory(full, f.g);
        REQUIRE(mapped.size() == red.y.size());
        double worst = 0.0;
        for (std::size_t k = 0; k < mapped.size(); ++k)
          worst = std::max({worst, std::abs(mapped[k].X - red.y[k][0]), std::abs(mapped[k].Y - red.y[k][1]),
                            std::abs(mapped[k].Z - red.y[k][2])});
        CAPTURE(f.g[1]);
        CAPTURE(f.g[2]);
        CHECK(worst <= 1e-6);
        for (const auto& d : red.drifts) CHECK_MESSAGE(d.ok(), d.name);
      }
      ++done;
    }
  }
}
