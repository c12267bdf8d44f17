#include "vortex/scattering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <deque>
#include <limits>
#include <numbers>
#include <thread>

#include "vortex/reduction.hpp"

namespace vortex::scattering {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double dist(const double* y, int i, int j) { return std::hypot(y[2 * i] - y[2 * j], y[2 * i + 1] - y[2 * j + 1]); }

// Unwrapped heading of vortex 3 along the run.
class Heading {
 public:
  explicit Heading(const std::vector<double>& g) : g_(g) {}

  double arg_at(const double* y) const {
    double v[6];
    core::rhs_flat(g_.data(), 3, y, v);
    return std::atan2(v[5], v[4]);
  }

  void start(double t, const double* y) {
    last_arg_ = arg_at(y);
    value_ = 0.0;
    hist_.clear();
    hist_.push_back({t, 0.0});
  }

  void advance(const integrate::DenseStep& dense, double ta, double tb, int depth) {
    std::vector<double> y = dense(tb);
    const double a = arg_at(y.data());
    const double inc = std::remainder(a - last_arg_, 2.0 * kPi);
    if (std::abs(inc) > kPi / 4 && depth < 12) {
      const double tm = 0.5 * (ta + tb);
      advance(dense, ta, tm, depth + 1);
      advance(dense, tm, tb, depth + 1);
      return;
    }
    value_ += inc;
    last_arg_ = a;
    hist_.push_back({tb, value_});
  }

  double value() const { return value_; }

  // Heading at an earlier time, interpolated between samples; NaN before the
  // first sample.
  double at(double t) {
    while (hist_.size() > 2 && hist_[1].first <= t) hist_.pop_front();
    if (hist_.empty() || t < hist_.front().first) return kNaN;
    for (std::size_t k = 0; k + 1 < hist_.size(); ++k) {
      const auto& [t0, v0] = hist_[k];
      const auto& [t1, v1] = hist_[k + 1];
      if (t <= t1) return t1 == t0 ? v1 : v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
    return hist_.back().second;
  }

 private:
  const std::vector<double>& g_;
  double last_arg_ = 0.0, value_ = 0.0;
  std::deque<std::pair<double, double>> hist_;
};

struct Geometry3 {
  int partner;
  double d13, d23;
  double R;       // distance of the other vortex from the dipole centroid
  double Rdot;
};

Geometry3 geometry(const double* y, const double* v) {
  Geometry3 g;
  g.d13 = dist(y, 0, 2);
  g.d23 = dist(y, 1, 2);
  g.partner = g.d13 <= g.d23 ? 1 : 2;
  const int p = g.partner - 1, o = 1 - p;
  const double cx = 0.5 * (y[4] + y[2 * p]), cy = 0.5 * (y[5] + y[2 * p + 1]);
  const double vx = 0.5 * (v[4] + v[2 * p]), vy = 0.5 * (v[5] + v[2 * p + 1]);
  const double rx = y[2 * o] - cx, ry = y[2 * o + 1] - cy;
  g.R = std::hypot(rx, ry);
  g.Rdot = (rx * (v[2 * o] - vx) + ry * (v[2 * o + 1] - vy)) / g.R;
  return g;
}

}  // namespace

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Direct: return "Direct";
    case Outcome::Exchange: return "Exchange";
    case Outcome::ExtendedDirect: return "ExtendedDirect";
  }
  return "?";
}

VortexState initial_state(const Setup& s) {
  if (!(s.d > 0.0)) raise(ErrorCode::BadSetup, "d must be positive");
  if (!(s.Gamma > 0.0)) raise(ErrorCode::BadSetup, "Gamma must be positive");
  if (!(s.L > 10.0 * std::max(1.0, std::abs(s.rho)))) raise(ErrorCode::BadSetup, "L must exceed 10 max(1, |rho|)");
  const double h = 0.5 * s.Gamma * s.d;
  return {{{-s.L, s.rho + h}, {0.0, -s.d}, {-s.L, s.rho - h}}, {1.0, s.Gamma, -1.0}};
}

double asymptotic_reduced_energy(double G, double d) {
  if (!(G > 0.0)) raise(ErrorCode::InvalidArgument, "Gamma must be positive");
  // Lab energy tends to log(G d): the two far log terms cancel.
  return std::log(G * d) - reduction::ReducedSystemSpec::gamma_family(G).offset;
}

Result run_state(const VortexState& s0, double d, double launch_distance, const RunOptions& opts) {
  s0.validate();
  if (s0.size() != 3) raise(ErrorCode::InvalidArgument, "scattering needs three vortices");
  const std::vector<double> g = s0.circulations;
  const std::vector<double> y0 = s0.flat();
  const double G = g[1];

  Result res;
  std::vector<double> v0(6);
  core::rhs_flat(g.data(), 3, y0.data(), v0.data());
  const auto geo0 = geometry(y0.data(), v0.data());
  res.initial_partner = geo0.partner;
  const double s_ref = geo0.partner == 1 ? geo0.d13 : geo0.d23;

  auto X_of = [&g](const double* y) { return reduction::reduce(VortexState::from_flat(y, g)).X; };
  auto Y_of = [&g](const double* y) { return reduction::reduce(VortexState::from_flat(y, g)).Y; };
  const double X0 = X_of(y0.data());
  res.max_X = res.min_X = X0;
  res.min_distance = core::min_pair_distance(s0);

  Heading heading(g);
  heading.start(0.0, y0.data());
  bool escaped = false;
  std::vector<double> v(6);

  integrate::Options o;
  o.method = opts.method;
  o.rtol = opts.rtol;
  o.atol = opts.atol;
  o.t_end = opts.t_max;
  if (!opts.keep_trajectory) o.sample_times = {opts.t_max};
  o.events.push_back({"X", [&](double, const double* y) { return X_of(y); }, 0, false});
  o.events.push_back({"Y", [&](double, const double* y) { return Y_of(y); }, 0, false});
  const auto c0 = core::conserved(s0);
  double sum_r = 0.0, sum_r2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double r = std::hypot(s0.positions[i][0], s0.positions[i][1]);
    sum_r += std::abs(g[i]) * r;
    sum_r2 += std::abs(g[i]) * r * r;
  }
  auto cons = [&g](const double* y) { return core::conserved(VortexState::from_flat(y, g)); };
  o.monitors.push_back({"H", [&](const double* y) { return core::hamiltonian_flat(g.data(), 3, y); }, 1e-8,
                        std::max(1.0, std::abs(c0.H))});
  o.monitors.push_back({"Mx", [&](const double* y) { return cons(y).M[0]; }, 1e-8, std::max(1.0, sum_r)});
  o.monitors.push_back({"My", [&](const double* y) { return cons(y).M[1]; }, 1e-8, std::max(1.0, sum_r)});
  o.monitors.push_back({"Theta", [&](const double* y) { return cons(y).Theta; }, 1e-8, std::max(1.0, sum_r2)});

  const int sub = std::max(1, opts.substeps);
  const double probe = opts.probe_interval * d;
  o.observer = [&](const integrate::StepView& st) {
    for (int k = 1; k <= sub; ++k) {
      const double ta = st.t0 + (st.t1 - st.t0) * (k - 1) / sub;
      const double tb = k == sub ? st.t1 : st.t0 + (st.t1 - st.t0) * k / sub;
      heading.advance(*st.dense, ta, tb, 0);
    }
    const double* y = st.y1;
    const auto ns = reduction::reduce(VortexState::from_flat(y, g));
    res.max_X = std::max(res.max_X, ns.X);
    res.min_X = std::min(res.min_X, ns.X);
    res.casimir = std::max(res.casimir, std::abs(reduction::casimir_residual(ns)) / std::max(1.0, ns.Z * ns.Z));
    res.min_distance = std::min({res.min_distance, dist(y, 0, 1), dist(y, 0, 2), dist(y, 1, 2)});

    core::rhs_flat(g.data(), 3, y, v.data());
    const auto gm = geometry(y, v.data());
    const double sp = gm.partner == 1 ? gm.d13 : gm.d23;
    if (std::abs(sp - s_ref) > opts.partner_tol * s_ref) return false;
    if (!(gm.R > opts.far_factor * d) || !(gm.Rdot > 0.0)) return false;
    if (opts.symmetric_exit && gm.R < launch_distance) return false;
    const double before = heading.at(st.t1 - probe);
    if (!(std::abs(heading.value() - before) < opts.heading_tol)) return false;
    escaped = true;
    return true;
  };

  auto tr = integrate::integrate(
      [&g](double, const double* y, double* dy) { core::rhs_flat(g.data(), 3, y, dy); }, y0, o);
  res.escaped = escaped;
  res.t_final = tr.t_final();
  res.steps = tr.accepted;
  if (!escaped && opts.throw_on_no_escape)
    raise(ErrorCode::NoEscape, "escape criterion unmet by t = " + std::to_string(opts.t_max));

  const auto& yf = tr.y_final();
  res.delta_alpha = heading.value();
  res.d13 = dist(yf.data(), 0, 2);
  res.d23 = dist(yf.data(), 1, 2);
  res.final_partner = res.d13 <= res.d23 ? 1 : 2;
  for (const auto& e : tr.events) (e.id == 0 ? res.x_crossings : res.y_crossings)++;
  for (const auto& dr : tr.drifts) {
    if (dr.name == "H") res.drift_H = dr.max_drift;
    else if (dr.name == "Theta") res.drift_Theta = dr.max_drift;
    else res.drift_M = std::max(res.drift_M, dr.max_drift);
  }
  if (res.final_partner != res.initial_partner) res.outcome = Outcome::Exchange;
  else res.outcome = res.x_crossings > 0 ? Outcome::ExtendedDirect : Outcome::Direct;

  if (G == 1.0 && g[0] == 1.0 && g[2] == -1.0) {
    integrate::Options ro;
    ro.method = opts.method;
    ro.rtol = opts.rtol;
    ro.atol = opts.atol;
    ro.t_end = res.t_final;
    ro.sample_times = {res.t_final};
    auto rt = reduction::integrate_reduced(reduction::ReducedSystemSpec::dipole(),
                                           reduction::reduce(s0), ro, true);
    res.delta_alpha_reduced = rt.y_final()[3];
  }
  if (opts.keep_trajectory) res.trajectory = std::move(tr);
  return res;
}

Result run(const Setup& s, const RunOptions& opts) {
  const auto s0 = initial_state(s);
  // Launch distance of vortex 2 from the incoming dipole centroid.
  const double launch = std::hypot(s.L, s.rho + s.d);
  return run_state(s0, s.d, launch, opts);
}

std::vector<double> rho_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) raise(ErrorCode::InvalidArgument, "need step > 0 and stop >= start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (long i = 0; i < n; ++i) out[i] = start + step * static_cast<double>(i);
  return out;
}

std::vector<SweepRow> sweep(const std::vector<double>& rhos, double Gamma, const Setup& base,
                            const RunOptions& opts, int jobs) {
  std::vector<SweepRow> rows(rhos.size());
  RunOptions ro = opts;
  ro.throw_on_no_escape = false;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      Setup s = base;
      s.rho = rhos[i];
      s.Gamma = Gamma;
      auto& row = rows[i];
      row.rho = s.rho;
      row.Theta = s.Theta();
      try {
        row.result = run(s, ro);
        row.delta_alpha = row.result.delta_alpha;
        row.delta_alpha_reduced = row.result.delta_alpha_reduced;
        row.outcome = row.result.outcome;
        row.near_separatrix = !row.result.escaped;
      } catch (const Error& e) {
        row.delta_alpha = kNaN;
        row.error = error_name(e.code());
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(rows.size())));
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

namespace {

// Increments of `vals` approaching the break; growing and one-signed means
// the curve runs off toward it.
bool runs_off(const std::vector<double>& vals) {
  if (vals.size() < 2) return false;
  double prev = 0.0;
  int sign = 0;
  for (std::size_t k = 1; k < vals.size(); ++k) {
    const double inc = vals[k] - vals[k - 1];
    const int sg = inc > 0.0 ? 1 : (inc < 0.0 ? -1 : 0);
    if (sg == 0 || (sign != 0 && sg != sign)) return false;
    sign = sg;
    if (k > 1 && !(std::abs(inc) > std::abs(prev))) return false;
    prev = inc;
  }
  return true;
}

}  // namespace

std::vector<Discontinuity> analyze(const std::vector<SweepRow>& rows, int window) {
  std::vector<std::size_t> good;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].error.empty() && rows[i].outcome && !rows[i].near_separatrix && std::isfinite(rows[i].delta_alpha))
      good.push_back(i);
  // Breaks between neighbouring good rows: big steps, class flips, or
  // failed rows in between. Breaks a couple of points apart are one feature.
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t k = 0; k + 1 < good.size(); ++k) {
    const auto i = good[k], j = good[k + 1];
    const bool brk = j != i + 1 || std::abs(rows[j].delta_alpha - rows[i].delta_alpha) > kPi ||
                     ((*rows[i].outcome == Outcome::Exchange) != (*rows[j].outcome == Outcome::Exchange));
    if (!brk) continue;
    if (!spans.empty() && k - spans.back().second < static_cast<std::size_t>(std::max(1, window / 2)))
      spans.back().second = k + 1;
    else
      spans.push_back({k, k + 1});
  }
  std::vector<Discontinuity> out;
  for (const auto& [a, b] : spans) {
    Discontinuity dsc;
    const auto i = good[a], j = good[b];
    dsc.rho_left = rows[i].rho;
    dsc.rho_right = rows[j].rho;
    dsc.jump = (b == a + 1 && j == i + 1) ? rows[j].delta_alpha - rows[i].delta_alpha : kNaN;
    // Left side in order toward the break, right side reversed so it also
    // approaches the break.
    std::vector<double> left, right;
    for (std::size_t m = a + 1 >= static_cast<std::size_t>(window) ? a + 1 - window : 0; m <= a; ++m)
      left.push_back(rows[good[m]].delta_alpha);
    for (std::size_t m = std::min(good.size() - 1, b + window - 1); m >= b; --m) {
      right.push_back(rows[good[m]].delta_alpha);
      if (m == 0) break;
    }
    const bool full = static_cast<int>(left.size()) == window && static_cast<int>(right.size()) == window;
    dsc.divergence = full && runs_off(left) && runs_off(right);
    if (!dsc.divergence && std::isfinite(dsc.jump)) {
      const double turns = std::round(dsc.jump / (2.0 * kPi));
      dsc.two_pi = turns != 0.0 && std::abs(dsc.jump - 2.0 * kPi * turns) < 0.5;
    }
    out.push_back(dsc);
  }
  return out;
}

}  // namespace vortex::scattering
