#include "gelfand/verify.hpp"

#include <algorithm>
#include <cmath>

#include "gelfand/error.hpp"
#include "gelfand/fixedpoint.hpp"
#include "gelfand/iterexp.hpp"

namespace gelfand::verify {

namespace {

double exp_checked(double x) {
  if (x > iterexp::kMaxExpArgument) throw OverflowError("verify: exponent out of range");
  return std::exp(x);
}

}  // namespace

double x_star(int n, double t, double w) {
  return 2.0 * (n - 2) * exp_checked(2.0 * t + iterexp::log_f_tail(w)) - 1.0;
}

double y_star(int n, double t, double w, double w_t) {
  const double second = 2.0 * (n - 2) * w_t * exp_checked(2.0 * t - exp_checked(w));
  return 2.0 * (x_star(n, t, w) + 1.0) - second;
}

double x_star_factored(int n, double t, double eta) {
  const auto ph = fixedpoint::phi_m1(n, t);
  const double psi = 2.0 * t + ph.phi;
  const double w = std::log(psi) + eta;
  // Q = e^{w + e^w - 2t}, R = F(w) e^{w + e^w}; e^{2t} F(w) = R / Q.
  const double log_q = std::log(psi) + ph.phi + eta + std::expm1(eta) * psi;
  const double log_r = iterexp::log_f_tail(w) + w + psi * std::exp(eta);
  return 2.0 * (n - 2) * std::exp(log_r - log_q) - 1.0;
}

double y_star_factored(int n, double t, double eta, double w_t) {
  const auto ph = fixedpoint::phi_m1(n, t);
  const double psi = 2.0 * t + ph.phi;
  // P = t e^{e^w - 2t} = t e^phi exp((e^eta - 1) psi).
  const double p = t * std::exp(ph.phi + std::expm1(eta) * psi);
  return 2.0 * (x_star_factored(n, t, eta) + 1.0) - 2.0 * (n - 2) * t * w_t / p;
}

double scaled_source(double t, double w) {
  return exp_checked(std::log(t) - 2.0 * t + exp_checked(w));
}

EquivalenceTrace equivalence_trace(int n, const transform::LogProfile& profile, double t_lo,
                                   double t_hi, double eps, std::size_t max_samples) {
  if (!(t_hi > t_lo)) throw DomainError("equivalence_trace: empty window");
  std::vector<transform::LogSample> window;
  for (const auto& s : profile.samples()) {
    if (s.t >= t_lo && s.t <= t_hi) window.push_back(s);
  }
  if (window.size() < 4) throw DomainError("equivalence_trace: too few samples in window");
  const std::size_t stride = std::max<std::size_t>(1, window.size() / max_samples);

  EquivalenceTrace tr;
  tr.eps_window = eps;
  for (std::size_t i = 0; i < window.size(); i += stride) {
    const auto& s = window[i];
    tr.samples.push_back({s.t, x_star(n, s.t, s.w), y_star(n, s.t, s.w, s.w_t)});
  }
  if (tr.samples.back().t != window.back().t) {
    const auto& s = window.back();
    tr.samples.push_back({s.t, x_star(n, s.t, s.w), y_star(n, s.t, s.w, s.w_t)});
  }

  tr.tail_start = 0.5 * (t_lo + t_hi);
  std::vector<EquivalenceSample> tail;
  for (const auto& s : tr.samples) {
    if (s.t >= tr.tail_start) tail.push_back(s);
  }
  if (tail.size() < 2) throw DomainError("equivalence_trace: empty tail window");
  tr.x_decreasing = true;
  tr.y_decreasing = true;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    tr.tail_sup = std::max(tr.tail_sup, std::abs(tail[i].x_star) + std::abs(tail[i].y_star));
    if (i == 0) continue;
    if (std::abs(tail[i].x_star) > std::abs(tail[i - 1].x_star)) tr.x_decreasing = false;
    if (std::abs(tail[i].y_star) > std::abs(tail[i - 1].y_star)) tr.y_decreasing = false;
  }
  tr.pass = std::isfinite(tr.tail_sup) && tr.tail_sup < 0.1 * eps && tr.x_decreasing &&
            tr.y_decreasing;
  return tr;
}

EquivalenceTrace equivalence_report(const shooting::SingularSolution& sol, double eps) {
  if (sol.problem.m != 1 || sol.problem.oracle()) {
    throw DomainError("equivalence_report: defined for the m = 1 tower problem only");
  }
  return equivalence_trace(sol.problem.n, sol.profile, sol.eta.config.T, sol.eta.config.t_max,
                           eps);
}

double miyamoto_profile_log(int n, double t) {
  return iterexp::f_tail_inverse_log(-2.0 * t - std::log(2.0 * (n - 2)));
}

double miyamoto_profile(int n, double r) {
  if (!(r > 0.0)) throw DomainError("miyamoto_profile: radius must be positive");
  return miyamoto_profile_log(n, -std::log(r));
}

}  // namespace gelfand::verify
