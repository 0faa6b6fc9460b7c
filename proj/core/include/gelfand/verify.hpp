#pragma once

// Equivalence of the constructed m = 1 singular solution with the
// F-characterised one, F(t) = int_t^inf exp(-e^s) ds:
//   x*(t) = 2(n-2) e^{2t} F(w*(t)) - 1,
//   y*(t) = 4(n-2) e^{2t} F(w*(t)) - 2(n-2) e^{2t} w*_t(t) / exp(e^{w*(t)}),
// both of which must tend to 0.

#include <vector>

#include "gelfand/shooting.hpp"
#include "gelfand/transform.hpp"

namespace gelfand::verify {

/// Direct log-domain evaluation from w and w_t.
double x_star(int n, double t, double w);
double y_star(int n, double t, double w, double w_t);

/// Evaluation through the ansatz factorisation w = ln(2t + phi) + eta, which
/// never forms exp(e^w).
double x_star_factored(int n, double t, double eta);
double y_star_factored(int n, double t, double eta, double w_t);

/// t e^{-2t} exp(e^w), which tends to n - 2.
double scaled_source(double t, double w);

struct EquivalenceSample {
  double t;
  double x_star;
  double y_star;
};

struct EquivalenceTrace {
  std::vector<EquivalenceSample> samples;
  double eps_window = 0.5;
  double tail_start = 0.0;
  double tail_sup = 0.0;          // sup over the tail of |x*| + |y*|
  bool x_decreasing = false;      // |x*| non-increasing over the tail
  bool y_decreasing = false;
  bool pass = false;              // tail_sup < eps/10 and both decreasing
};

/// Samples the profile on [t_lo, t_hi] (at most max_samples evenly thinned
/// samples); the tail is the last half of the window.
EquivalenceTrace equivalence_trace(int n, const transform::LogProfile& profile, double t_lo,
                                   double t_hi, double eps = 0.5,
                                   std::size_t max_samples = 400);

/// Trace over the corrector window [T, t_max] of an m = 1 construction.
/// Throws DomainError for m != 1 or oracle mode.
EquivalenceTrace equivalence_report(const shooting::SingularSolution& sol, double eps = 0.5);

/// U(r) = F^{-1}(r^2 / (2(n-2))).
double miyamoto_profile(int n, double r);
/// U(e^{-t}), for radii that underflow.
double miyamoto_profile_log(int n, double t);

}  // namespace gelfand::verify
