#include "gelfand/shooting.hpp"

#include <algorithm>
#include <cmath>

#include "gelfand/error.hpp"
#include "gelfand/numeric.hpp"
#include "gelfand/ode.hpp"

namespace gelfand::shooting {

using transform::LogProfile;
using transform::LogSample;

transform::RadialProfile SingularSolution::radial() const {
  return transform::log_to_radial(profile, lambda_star);
}

LogProfile assemble_w(const fixedpoint::EtaSolution& eta) {
  const fixedpoint::Ansatz ansatz(eta.problem);
  const std::size_t n = eta.exposed_size();
  std::vector<LogSample> out;
  out.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto b = ansatz.base(eta.grid[j]);
    out.push_back({eta.grid[j], b.f + eta.eta[j], b.f_t + eta.eta_t[j]});
  }
  // close the range at exactly t_max
  const double t_end = eta.config.t_max;
  if (out.empty() || out.back().t < t_end - 1e-12 * t_end) {
    const auto b = ansatz.base(t_end);
    out.push_back({t_end, b.f + eta.eta_at(t_end), b.f_t + eta.eta_t_at(t_end)});
  }
  return LogProfile(std::move(out));
}

DownResult integrate_down(const ProblemSpec& p, const LogProfile& profile,
                          const ShootingOptions& opts) {
  if (profile.empty()) throw DomainError("integrate_down: empty profile");
  const LogSample start = profile.samples().front();
  if (!(start.w > 0.0)) throw DomainError("integrate_down: w must be positive at the start");

  const int c = p.n - 2;
  const ode::Integrator integ(
      [&p, c](double t, const ode::State& y) -> ode::State {
        return {y[1], c * y[1] - source_term(p, t, y[0])};
      },
      ode::Options{opts.rtol, opts.atol, 0.0, 0.5, 2'000'000});

  const double dt = opts.sample_dt;
  std::vector<LogSample> down;  // decreasing t
  long k = 1;
  const auto zc = ode::integrate_to_zero(
      integ, start.t, {start.w, start.w_t}, start.t - opts.floor_span,
      [&](const ode::Step& s) {
        while (true) {
          const double tk = start.t - k * dt;
          if (tk < s.t1) break;
          const auto y = s.at(tk);
          down.push_back({tk, y[0], y[1]});
          ++k;
        }
        return true;
      });
  if (!zc.found) {
    throw ConvergenceError("integrate_down: no zero of w above t = " +
                           numeric::format_double(start.t - opts.floor_span));
  }
  while (!down.empty() && down.back().t <= zc.t + 0.1 * dt) down.pop_back();
  down.push_back({zc.t, 0.0, zc.y[1]});
  std::reverse(down.begin(), down.end());

  DownResult res;
  res.t_star = zc.t;
  res.steps = zc.result.steps;
  std::vector<LogSample> all = std::move(down);
  all.insert(all.end(), profile.samples().begin(), profile.samples().end());
  res.monotone = std::all_of(all.begin(), all.end(), [](const LogSample& s) { return s.w_t > 0.0; });
  res.profile = LogProfile(std::move(all));
  return res;
}

SingularSolution build_singular(const ProblemSpec& p, const fixedpoint::EtaSpaceConfig& cfg,
                                const ShootingOptions& opts) {
  SingularSolution sol;
  sol.problem = p;
  sol.eta = fixedpoint::picard_solve(p, cfg);
  const LogProfile upper = assemble_w(sol.eta);

  sol.t_hand = sol.eta.config.T + opts.hand_offset;
  if (!(sol.t_hand < sol.eta.config.t_max)) throw DomainError("build_singular: handoff beyond t_max");
  const fixedpoint::Ansatz ansatz(p);
  const auto b = ansatz.base(sol.t_hand);
  std::vector<LogSample> tail{{sol.t_hand, b.f + sol.eta.eta_at(sol.t_hand),
                               b.f_t + sol.eta.eta_t_at(sol.t_hand)}};
  for (const auto& s : upper.samples()) {
    if (s.t > sol.t_hand + 1e-9) tail.push_back(s);
  }

  DownResult down = integrate_down(p, LogProfile(std::move(tail)), opts);
  sol.t_star = down.t_star;
  sol.lambda_star = std::exp(-2.0 * down.t_star);
  sol.monotone = down.monotone;
  sol.ode_steps = down.steps;
  sol.profile = std::move(down.profile);
  sol.residual = ode_residual(sol.profile, p);
  return sol;
}

double ode_residual(const LogProfile& profile, const ProblemSpec& p) {
  const auto t = profile.t_values();
  const auto wt = profile.w_t_values();
  if (t.size() < 5) throw DomainError("ode_residual: need at least 5 samples");
  const auto wtt = numeric::fd_derivative(t, wt, 5);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& s = profile.samples()[i];
    worst = std::max(worst, relative_residual(p, s.t, s.w, s.w_t, wtt[i]));
  }
  return worst;
}

}  // namespace gelfand::shooting
