#include "vortex/integrate.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <optional>

#include "dop853_tableau.hpp"
#include "vortex/errors.hpp"

namespace vortex::integrate {

namespace tab = detail::dop853;

DenseStep::DenseStep(double t0, double t1, std::vector<double> y0, std::vector<double> coeffs)
    : t0_(t0), t1_(t1), y0_(std::move(y0)), f_(std::move(coeffs)) {}

void DenseStep::eval(double t, double* out) const {
  const std::size_t n = y0_.size();
  const int rows = static_cast<int>(f_.size() / n);
  const double x = (t - t0_) / (t1_ - t0_);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (int r = rows - 1; r >= 0; --r) {
      acc += f_[r * n + k];
      acc *= (r % 2 == 0) ? x : 1.0 - x;
    }
    out[k] = acc + y0_[k];
  }
}

std::vector<double> DenseStep::operator()(double t) const {
  std::vector<double> out(y0_.size());
  eval(t, out.data());
  return out;
}

std::vector<double> Trajectory::at(double time) const {
  if (dense.empty()) raise(ErrorCode::InvalidArgument, "trajectory kept no dense output");
  auto lo = [](const DenseStep& d) { return std::min(d.t0(), d.t1()); };
  auto it = std::upper_bound(dense.begin(), dense.end(), time,
                             [&](double v, const DenseStep& d) { return v < lo(d); });
  if (it != dense.begin()) --it;
  return (*it)(time);
}

std::vector<EventRecord> find_event(const Trajectory& traj, std::size_t event_id) {
  std::vector<EventRecord> out;
  for (const auto& e : traj.events)
    if (e.id == event_id) out.push_back(e);
  return out;
}

namespace {

constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;

double rms(const std::vector<double>& v, const std::vector<double>& scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] / scale[i]) * (v[i] / scale[i]);
  return std::sqrt(s / static_cast<double>(v.size()));
}

bool crossed(double g0, double g1, int direction) {
  const bool rising = g0 < 0.0 && g1 >= 0.0;
  const bool falling = g0 > 0.0 && g1 <= 0.0;
  if (direction > 0) return rising;
  if (direction < 0) return falling;
  return rising || falling;
}

class Stepper {
 public:
  Stepper(const Rhs& rhs, std::size_t n, std::size_t& nfev) : rhs_(rhs), n_(n), nfev_(nfev) {}

  void eval(double t, const double* y, double* out) {
    rhs_(t, y, out);
    ++nfev_;
    for (std::size_t i = 0; i < n_; ++i)
      if (!std::isfinite(out[i])) raise(ErrorCode::NonFiniteRHS, "at t=" + std::to_string(t));
  }

 private:
  const Rhs& rhs_;
  std::size_t n_;
  std::size_t& nfev_;
};

using Stages = std::vector<std::vector<double>>;

// Each scheme: K[0] = f(t, y) on entry; stages() fills K[1..] and ynew and
// leaves f(t + h, ynew) in K[last()]; error() is the scaled norm; dense()
// runs after acceptance.
struct Dop853Scheme {
  static constexpr int kOrder = 8;
  static constexpr double kMaxGrowth = 6.0, kMaxShrink = 3.0;
  static constexpr int kSlots = tab::kStagesExtended;
  static int last() { return tab::kStages; }

  static void stages(Stepper& st, double t, double hd, const std::vector<double>& y, Stages& K,
                     std::vector<double>& ytmp, std::vector<double>& ynew) {
    const std::size_t n = y.size();
    for (int s = 1; s < tab::kStages; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += tab::A[s][j] * K[j][i];
        ytmp[i] = y[i] + hd * acc;
      }
      st.eval(t + tab::C[s] * hd, ytmp.data(), K[s].data());
    }
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < tab::kStages; ++j) acc += tab::B[j] * K[j][i];
      ynew[i] = y[i] + hd * acc;
    }
    st.eval(t + hd, ynew.data(), K[tab::kStages].data());
  }

  static double error(double h, const Options& o, const std::vector<double>& y, const std::vector<double>& ynew,
                      const Stages& K) {
    const std::size_t n = y.size();
    double s5 = 0.0, s3 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double a5 = 0.0, a3 = 0.0;
      for (int j = 0; j <= tab::kStages; ++j) {
        a5 += tab::E5[j] * K[j][i];
        a3 += tab::E3[j] * K[j][i];
      }
      s5 += (a5 / sc) * (a5 / sc);
      s3 += (a3 / sc) * (a3 / sc);
    }
    if (s5 == 0.0 && s3 == 0.0) return 0.0;
    return h * s5 / std::sqrt((s5 + 0.01 * s3) * static_cast<double>(n));
  }

  static std::vector<double> dense(Stepper& st, double t, double hd, const std::vector<double>& y,
                                   const std::vector<double>& ynew, Stages& K, std::vector<double>& ytmp) {
    const std::size_t n = y.size();
    for (int s = tab::kStages + 1; s < tab::kStagesExtended; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += tab::A[s][j] * K[j][i];
        ytmp[i] = y[i] + hd * acc;
      }
      st.eval(t + tab::C[s] * hd, ytmp.data(), K[s].data());
    }
    std::vector<double> F(tab::kInterpolatorPower * n);
    for (std::size_t i = 0; i < n; ++i) {
      const double dy = ynew[i] - y[i];
      F[i] = dy;
      F[n + i] = hd * K[0][i] - dy;
      F[2 * n + i] = 2.0 * dy - hd * (K[tab::kStages][i] + K[0][i]);
      for (int r = 0; r < 4; ++r) {
        double acc = 0.0;
        for (int j = 0; j < tab::kStagesExtended; ++j) acc += tab::D[r][j] * K[j][i];
        F[(3 + r) * n + i] = hd * acc;
      }
    }
    return F;
  }
};

struct Dopri5Scheme {
  static constexpr int kOrder = 5;
  static constexpr double kMaxGrowth = 10.0, kMaxShrink = 5.0;
  static constexpr int kSlots = 7;
  static int last() { return 6; }

  static constexpr double C[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double A[7][6] = {
      {0, 0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  };
  static constexpr double E[7] = {71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                  -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};
  static constexpr double D[7] = {-12715105075.0 / 11282082432.0, 0.0,
                                  87487479700.0 / 32700410799.0,  -10690763975.0 / 1880347072.0,
                                  701980252875.0 / 199316789632.0, -1453857185.0 / 822651844.0,
                                  69997945.0 / 29380423.0};

  static void stages(Stepper& st, double t, double hd, const std::vector<double>& y, Stages& K,
                     std::vector<double>& ytmp, std::vector<double>& ynew) {
    const std::size_t n = y.size();
    for (int s = 1; s < 6; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += A[s][j] * K[j][i];
        ytmp[i] = y[i] + hd * acc;
      }
      st.eval(t + C[s] * hd, ytmp.data(), K[s].data());
    }
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 6; ++j) acc += A[6][j] * K[j][i];
      ynew[i] = y[i] + hd * acc;
    }
    st.eval(t + hd, ynew.data(), K[6].data());
  }

  static double error(double h, const Options& o, const std::vector<double>& y, const std::vector<double>& ynew,
                      const Stages& K) {
    const std::size_t n = y.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double a = 0.0;
      for (int j = 0; j < 7; ++j) a += E[j] * K[j][i];
      a *= h / sc;
      s += a * a;
    }
    return std::sqrt(s / static_cast<double>(n));
  }

  static std::vector<double> dense(Stepper&, double, double hd, const std::vector<double>& y,
                                   const std::vector<double>& ynew, Stages& K, std::vector<double>&) {
    const std::size_t n = y.size();
    std::vector<double> F(4 * n);
    for (std::size_t i = 0; i < n; ++i) {
      const double dy = ynew[i] - y[i];
      const double bspl = hd * K[0][i] - dy;
      F[i] = dy;
      F[n + i] = bspl;
      F[2 * n + i] = dy - hd * K[6][i] - bspl;
      double acc = 0.0;
      for (int j = 0; j < 7; ++j) acc += D[j] * K[j][i];
      F[3 * n + i] = hd * acc;
    }
    return F;
  }
};

template <class Scheme>
Trajectory run(const Rhs& rhs, std::vector<double> y, const Options& o) {
  const std::size_t n = y.size();
  Trajectory tr;
  tr.dim = n;
  Stepper st(rhs, n, tr.nfev);

  double t = o.t_start;
  const double dir = o.t_end >= o.t_start ? 1.0 : -1.0;
  tr.t.push_back(t);
  tr.y.push_back(y);

  std::vector<double> y0_mon(o.monitors.size());
  for (std::size_t m = 0; m < o.monitors.size(); ++m) {
    y0_mon[m] = o.monitors[m].fn(y.data());
    tr.drifts.push_back({o.monitors[m].name, 0.0, o.monitors[m].threshold});
  }
  if (o.t_end == o.t_start) return tr;

  Stages K(Scheme::kSlots, std::vector<double>(n));
  std::vector<double> f(n), ynew(n), ytmp(n), scale(n), diff(n);
  st.eval(t, y.data(), f.data());

  std::vector<double> g_prev(o.events.size());
  for (std::size_t e = 0; e < o.events.size(); ++e) g_prev[e] = o.events[e].fn(t, y.data());

  std::size_t next_sample = 0;
  while (next_sample < o.sample_times.size() &&
         dir * (o.sample_times[next_sample] - t) <= 0.0)
    ++next_sample;

  // Initial step following Hairer's heuristic.
  double h = o.first_step;
  if (!(h > 0.0)) {
    for (std::size_t i = 0; i < n; ++i) scale[i] = o.atol + std::abs(y[i]) * o.rtol;
    const double d0 = rms(y, scale), d1 = rms(f, scale);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, o.max_step);
    h0 = std::min(h0, std::abs(o.t_end - t));
    for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + dir * h0 * f[i];
    double h1 = h0;
    try {
      st.eval(t + dir * h0, ytmp.data(), K[1].data());
      for (std::size_t i = 0; i < n; ++i) diff[i] = K[1][i] - f[i];
      const double d2 = rms(diff, scale) / h0;
      const double dm = std::max(d1, d2);
      h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / Scheme::kOrder);
    } catch (const Error&) {
      h1 = h0 * 1e-3;
    }
    h = std::min({100.0 * h0, h1, o.max_step});
  }

  const double expo = 1.0 / Scheme::kOrder - kBeta * 0.75 * (Scheme::kOrder == 5 ? 1.0 : 4.0 / 15.0);
  double facold = 1e-4;
  bool rejected_last = false;
  std::optional<Error> stage_error;

  while (true) {
    if (tr.accepted + tr.rejected >= o.max_steps)
      raise(ErrorCode::StepSizeUnderflow, "step budget exhausted at t=" + std::to_string(t));
    const double remaining = std::abs(o.t_end - t);
    h = std::min({h, o.max_step, remaining});
    bool last = h >= remaining * (1.0 - 1e-13);
    if (last) h = remaining;
    const double hd = dir * h;
    if (h < o.min_step || t + hd == t) {
      if (stage_error) throw *stage_error;
      raise(ErrorCode::StepSizeUnderflow, "step " + std::to_string(h) + " at t=" + std::to_string(t));
    }

    try {
      K[0] = f;
      Scheme::stages(st, t, hd, y, K, ytmp, ynew);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::CoincidentVortices && err.code() != ErrorCode::NonFiniteRHS &&
          err.code() != ErrorCode::SingularState)
        throw;
      stage_error = err;
      ++tr.rejected;
      rejected_last = true;
      h *= 0.25;
      continue;
    }

    double err = Scheme::error(h, o, y, ynew, K);
    if (!std::isfinite(err)) err = 1e10;

    const double fac11 = std::pow(std::max(err, 1e-300), expo);
    if (err > 1.0) {
      ++tr.rejected;
      rejected_last = true;
      h = h / std::min(Scheme::kMaxShrink, fac11 / kSafety);
      continue;
    }

    stage_error.reset();
    double fac = fac11 / std::pow(facold, kBeta);
    fac = std::clamp(fac / kSafety, 1.0 / Scheme::kMaxGrowth, Scheme::kMaxShrink);
    double hnew = h / fac;
    if (rejected_last) hnew = std::min(hnew, h);
    rejected_last = false;
    facold = std::max(err, 1e-4);
    ++tr.accepted;

    std::vector<double> F;
    try {
      F = Scheme::dense(st, t, hd, y, ynew, K, ytmp);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CoincidentVortices && e.code() != ErrorCode::NonFiniteRHS &&
          e.code() != ErrorCode::SingularState)
        throw;
      --tr.accepted;
      ++tr.rejected;
      stage_error = e;
      h *= 0.25;
      continue;
    }
    const int flast = Scheme::last();
    double tnew = last ? o.t_end : t + hd;
    DenseStep ds(t, tnew, y, std::move(F));

    // Events on this step.
    std::vector<EventRecord> found;
    std::vector<double> g_new(o.events.size());
    std::optional<double> t_stop;
    for (std::size_t e = 0; e < o.events.size(); ++e) {
      const auto& ev = o.events[e];
      g_new[e] = ev.fn(tnew, ynew.data());
      if (!crossed(g_prev[e], g_new[e], ev.direction)) continue;
      std::vector<double> buf(n);
      auto g = [&](double tt) {
        ds.eval(tt, buf.data());
        return ev.fn(tt, buf.data());
      };
      double a = t, b = tnew, ga = g_prev[e], gb = g_new[e];
      if (a > b) {
        std::swap(a, b);
        std::swap(ga, gb);
      }
      double troot;
      if (gb == 0.0) troot = b;
      else if (ga == 0.0) troot = a;
      else {
        std::uintmax_t iters = 200;
        auto tol = [](double lo, double hi) {
          return std::abs(hi - lo) <= std::max(1e-13, 4e-16 * std::abs(lo));
        };
        auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
        troot = std::abs(g(r.first)) <= std::abs(g(r.second)) ? r.first : r.second;
      }
      found.push_back({troot, e, ds(troot)});
      if (ev.terminal && (!t_stop || dir * (troot - *t_stop) < 0.0)) t_stop = troot;
    }
    std::sort(found.begin(), found.end(),
              [&](const EventRecord& a, const EventRecord& b) { return dir * (a.t - b.t) < 0.0; });
    for (auto& rec : found)
      if (!t_stop || dir * (rec.t - *t_stop) <= 0.0) tr.events.push_back(std::move(rec));
    g_prev = g_new;

    double t_end_step = tnew;
    if (t_stop) {
      t_end_step = *t_stop;
      ynew = ds(t_end_step);
    }

    if (o.sample_times.empty()) {
      tr.t.push_back(t_end_step);
      tr.y.push_back(ynew);
    } else {
      while (next_sample < o.sample_times.size() &&
             dir * (o.sample_times[next_sample] - t_end_step) <= 0.0) {
        const double ts = o.sample_times[next_sample++];
        if (dir * (ts - tr.t.back()) <= 0.0) continue;
        tr.t.push_back(ts);
        tr.y.push_back(ts == tnew ? ynew : ds(ts));
      }
    }

    for (std::size_t m = 0; m < o.monitors.size(); ++m) {
      const double d = std::abs(o.monitors[m].fn(ynew.data()) - y0_mon[m]) / o.monitors[m].scale;
      tr.drifts[m].max_drift = std::max(tr.drifts[m].max_drift, d);
    }

    bool halt = false;
    if (o.observer) {
      StepView view{t, t_end_step, y.data(), ynew.data(), n, &ds};
      halt = o.observer(view);
    }
    if (o.keep_dense) tr.dense.push_back(ds);

    if (t_stop || halt || last) {
      if (tr.t.back() != t_end_step) {
        tr.t.push_back(t_end_step);
        tr.y.push_back(ynew);
      }
      tr.status = t_stop ? Status::TerminalEvent : (halt && !last ? Status::Halted : Status::Finished);
      break;
    }
    t = tnew;
    y = ynew;
    f = K[flast];
    h = hnew;
  }

  if (dir < 0.0) {
    std::reverse(tr.t.begin(), tr.t.end());
    std::reverse(tr.y.begin(), tr.y.end());
    std::reverse(tr.events.begin(), tr.events.end());
    std::reverse(tr.dense.begin(), tr.dense.end());
  }
  return tr;
}

}  // namespace

Trajectory integrate(const Rhs& rhs, std::vector<double> y, const Options& o) {
  if (!(o.rtol > 0.0) || !(o.atol > 0.0)) raise(ErrorCode::InvalidArgument, "tolerances must be positive");
  if (!std::isfinite(o.t_end) || !std::isfinite(o.t_start))
    raise(ErrorCode::InvalidArgument, "time span must be finite");
  if (y.empty()) raise(ErrorCode::InvalidArgument, "empty state");
  if (o.method == Method::Dop853) return run<Dop853Scheme>(rhs, std::move(y), o);
  return run<Dopri5Scheme>(rhs, std::move(y), o);
}

}  // namespace vortex::integrate
