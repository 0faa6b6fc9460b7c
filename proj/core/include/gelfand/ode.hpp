#pragma once

// Dormand-Prince 5(4) for two-component first-order systems, with the
// classical 4th-order continuous extension. Integrates in either direction.

#include <array>
#include <functional>

namespace gelfand::ode {

using State = std::array<double, 2>;
using Rhs = std::function<State(double, const State&)>;

struct Options {
  double rtol = 1e-12;
  double atol = 1e-14;
  double h_init = 0.0;   // 0: automatic
  double h_max = 0.0;    // 0: unbounded
  long max_steps = 2'000'000;
};

/// One accepted step [t0, t1] with its dense-output coefficients.
class Step {
 public:
  double t0 = 0.0;
  double t1 = 0.0;
  State y0{};
  State y1{};
  State f0{};
  State f1{};

  /// Dense output at t in [min(t0,t1), max(t0,t1)].
  State at(double t) const;

 private:
  friend class Integrator;
  std::array<State, 5> rcont_{};
};

/// Called after every accepted step; return false to stop.
using Observer = std::function<bool(const Step&)>;

struct Result {
  double t = 0.0;
  State y{};
  long steps = 0;
  long rejected = 0;
  bool stopped_by_observer = false;
};

class Integrator {
 public:
  Integrator(Rhs rhs, Options opts = {}) : rhs_(std::move(rhs)), opts_(opts) {}

  /// Integrates from (t0, y0) toward t_end. Throws ConvergenceError when the
  /// step size underflows or max_steps is exceeded. Stage evaluations that
  /// throw OverflowError cause a step rejection with a smaller step.
  Result integrate(double t0, const State& y0, double t_end, const Observer& obs = {}) const;

  /// A single fixed step of size h from (t, y), no error control.
  State single_step(double t, const State& y, double h) const;

 private:
  Rhs rhs_;
  Options opts_;
};

/// First point where component 0 drops from positive to <= 0.
struct ZeroCrossing {
  bool found = false;
  double t = 0.0;
  State y{};
  Result result;
};

/// Integrates toward t_end and stops at the first sign change of y[0],
/// located by bracketing on the dense output and polished by Newton on
/// direct single steps. `obs` sees every accepted step, including the one
/// containing the crossing.
ZeroCrossing integrate_to_zero(const Integrator& integ, double t0, const State& y0,
                               double t_end, const Observer& obs = {}, double t_tol = 1e-13);

}  // namespace gelfand::ode
