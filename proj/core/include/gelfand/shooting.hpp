#pragma once

// Singular solution: ansatz + corrector on [T_hand, t_max], continued by
// backward integration of
//   w_tt - (n-2) w_t + exp(G_m(w) - 2t) = 0
// down to the zero t_star of w; lambda* = exp(-2 t_star).

#include "gelfand/fixedpoint.hpp"
#include "gelfand/problem.hpp"
#include "gelfand/transform.hpp"

namespace gelfand::shooting {

struct ShootingOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double sample_dt = 0.01;     // spacing of dense-output samples
  double hand_offset = 5.0;    // T_hand = T + hand_offset
  double floor_span = 200.0;   // give up below T_hand - floor_span
};

struct SingularSolution {
  ProblemSpec problem;
  double t_star = 0.0;
  double lambda_star = 0.0;
  double t_hand = 0.0;
  transform::LogProfile profile;  // [t_star, t_max]
  fixedpoint::EtaSolution eta;
  double residual = 0.0;
  bool monotone = false;
  long ode_steps = 0;

  /// u*(x) on the unit ball: r = e^{-t} / sqrt(lambda*).
  transform::RadialProfile radial() const;
};

/// w = f + eta and w_t = f_t + eta_t on the corrector grid up to t_max.
transform::LogProfile assemble_w(const fixedpoint::EtaSolution& eta);

struct DownResult {
  double t_star = 0.0;
  transform::LogProfile profile;  // [t_star, input t_max]
  bool monotone = false;
  long steps = 0;
};

/// Integrates from the first sample of `profile` toward decreasing t until
/// w vanishes, and prepends the integrated samples. Throws ConvergenceError
/// when no zero is found above the floor.
DownResult integrate_down(const ProblemSpec& p, const transform::LogProfile& profile,
                          const ShootingOptions& opts = {});

/// picard_solve -> assemble_w -> integrate_down.
SingularSolution build_singular(const ProblemSpec& p, const fixedpoint::EtaSpaceConfig& cfg,
                                const ShootingOptions& opts = {});

/// max over samples of |w_tt - (n-2) w_t + exp(G_m(w) - 2t)| relative to the
/// largest term, with w_tt from a five-point stencil on the w_t samples.
double ode_residual(const transform::LogProfile& profile, const ProblemSpec& p);

}  // namespace gelfand::shooting
