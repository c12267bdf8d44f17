#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace vortex::integrate {

using Rhs = std::function<void(double t, const double* y, double* dydt)>;
using EventFn = std::function<double(double t, const double* y)>;

struct EventSpec {
  std::string name;
  EventFn fn;
  int direction = 0;  // +1 rising only, -1 falling only, 0 both
  bool terminal = false;
};

struct InvariantMonitor {
  std::string name;
  std::function<double(const double* y)> fn;
  double threshold = 1e-8;
  double scale = 1.0;  // drift is |f(y) - f(y0)| / scale
};

// Continuous extension of one accepted step.
class DenseStep {
 public:
  DenseStep() = default;
  DenseStep(double t0, double t1, std::vector<double> y0, std::vector<double> coeffs);
  void eval(double t, double* out) const;
  std::vector<double> operator()(double t) const;
  double t0() const { return t0_; }
  double t1() const { return t1_; }

 private:
  double t0_ = 0.0, t1_ = 0.0;
  std::vector<double> y0_;
  std::vector<double> f_;  // rows of length n, nested alternately in x and 1 - x
};

struct StepView {
  double t0, t1;
  const double* y0;
  const double* y1;
  std::size_t n;
  const DenseStep* dense;
};

enum class Method {
  Dopri5,  // Dormand-Prince 5(4), fourth-order dense output
  Dop853,  // Dormand-Prince 8(5,3), seventh-order dense output
};

struct Options {
  Method method = Method::Dopri5;
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double first_step = 0.0;  // 0 selects automatically
  double min_step = 1e-14;
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t max_steps = 100'000'000;
  std::vector<EventSpec> events;
  std::vector<InvariantMonitor> monitors;
  // When empty every accepted step is stored; otherwise only these times
  // (plus t_start and the stopping time).
  std::vector<double> sample_times;
  bool keep_dense = false;
  // Called after every accepted step; returning true stops the integration.
  std::function<bool(const StepView&)> observer;
};

struct EventRecord {
  double t;
  std::size_t id;
  std::vector<double> y;
};

struct Drift {
  std::string name;
  double max_drift = 0.0;
  double threshold = 0.0;
  bool ok() const { return max_drift <= threshold; }
};

enum class Status { Finished, TerminalEvent, Halted };

struct Trajectory {
  std::size_t dim = 0;
  std::vector<double> t;
  std::vector<std::vector<double>> y;
  std::vector<EventRecord> events;
  std::vector<Drift> drifts;
  std::vector<DenseStep> dense;
  Status status = Status::Finished;
  std::size_t accepted = 0, rejected = 0, nfev = 0;

  double t_final() const { return t.back(); }
  const std::vector<double>& y_final() const { return y.back(); }
  // Needs keep_dense.
  std::vector<double> at(double time) const;
};

// Adaptive embedded Runge-Kutta with PI step control and dense output.
// Throws StepSizeUnderflow, NonFiniteRHS, or the error raised by rhs when a
// step cannot be completed.
Trajectory integrate(const Rhs& rhs, std::vector<double> y0, const Options& opts);

std::vector<EventRecord> find_event(const Trajectory& traj, std::size_t event_id);

}  // namespace vortex::integrate
