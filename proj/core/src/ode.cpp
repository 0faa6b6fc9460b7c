#include "gelfand/ode.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <boost/math/tools/roots.hpp>

#include "gelfand/error.hpp"

namespace gelfand::ode {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
  State out = y;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (const auto& [c, k] : terms) s += c * (*k)[i];
    out[i] += h * s;
  }
  return out;
}

bool finite(const State& y) { return std::isfinite(y[0]) && std::isfinite(y[1]); }

struct Trial {
  State y1;
  State err;
  std::array<State, 7> k;
};

std::optional<Trial> attempt(const Rhs& f, double t, const State& y, const State& k1, double h) {
  try {
    Trial tr;
    auto& k = tr.k;
    k[0] = k1;
    k[1] = f(t + c2 * h, axpy(y, h, {{a21, &k[0]}}));
    k[2] = f(t + c3 * h, axpy(y, h, {{a31, &k[0]}, {a32, &k[1]}}));
    k[3] = f(t + c4 * h, axpy(y, h, {{a41, &k[0]}, {a42, &k[1]}, {a43, &k[2]}}));
    k[4] = f(t + c5 * h, axpy(y, h, {{a51, &k[0]}, {a52, &k[1]}, {a53, &k[2]}, {a54, &k[3]}}));
    k[5] = f(t + h, axpy(y, h, {{a61, &k[0]}, {a62, &k[1]}, {a63, &k[2]}, {a64, &k[3]},
                                {a65, &k[4]}}));
    tr.y1 = axpy(y, h, {{a71, &k[0]}, {a73, &k[2]}, {a74, &k[3]}, {a75, &k[4]}, {a76, &k[5]}});
    k[6] = f(t + h, tr.y1);
    for (std::size_t i = 0; i < y.size(); ++i) {
      tr.err[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                       e6 * k[5][i] + e7 * k[6][i]);
    }
    if (!finite(tr.y1) || !finite(k[6])) return std::nullopt;
    return tr;
  } catch (const OverflowError&) {
    return std::nullopt;
  }
}

}  // namespace

State Step::at(double t) const {
  const double h = t1 - t0;
  const double th = (h == 0.0) ? 0.0 : (t - t0) / h;
  const double th1 = 1.0 - th;
  State out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = rcont_[0][i] +
             th * (rcont_[1][i] + th1 * (rcont_[2][i] + th * (rcont_[3][i] + th1 * rcont_[4][i])));
  }
  return out;
}

State Integrator::single_step(double t, const State& y, double h) const {
  auto tr = attempt(rhs_, t, y, rhs_(t, y), h);
  if (!tr) throw OverflowError("single_step: stage evaluation out of range");
  return tr->y1;
}

Result Integrator::integrate(double t0, const State& y0, double t_end, const Observer& obs) const {
  Result res;
  res.t = t0;
  res.y = y0;
  if (t_end == t0) return res;
  const double dir = (t_end > t0) ? 1.0 : -1.0;
  const double span = std::abs(t_end - t0);
  const double h_max = opts_.h_max > 0.0 ? opts_.h_max : span;

  double t = t0;
  State y = y0;
  State k1 = rhs_(t, y);

  auto scale = [&](std::size_t i, const State& a, const State& b) {
    return opts_.atol + opts_.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
  };

  double h = opts_.h_init;
  if (h <= 0.0) {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double sk = scale(i, y, y);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, h_max);
  }
  h = std::min(h, h_max);

  bool last_rejected = false;
  while (true) {
    if (res.steps + res.rejected >= opts_.max_steps) {
      throw ConvergenceError("ode: maximum number of steps exceeded");
    }
    bool finishing = false;
    if (h >= std::abs(t_end - t)) {
      h = std::abs(t_end - t);
      finishing = true;
    }
    if (h < 1e-15 * std::max(1.0, std::abs(t))) {
      throw ConvergenceError("ode: step size underflow");
    }
    const double hs = dir * h;
    auto tr = attempt(rhs_, t, y, k1, hs);
    if (!tr) {
      h *= 0.25;
      ++res.rejected;
      last_rejected = true;
      continue;
    }
    double err = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double e = tr->err[i] / scale(i, y, tr->y1);
      err += e * e;
    }
    err = std::sqrt(err / y.size());
    if (!std::isfinite(err)) err = 1e10;

    double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
    fac = std::clamp(fac, 0.2, 10.0);
    if (err > 1.0) {
      h *= std::max(fac, 0.1);
      ++res.rejected;
      last_rejected = true;
      continue;
    }

    Step step;
    step.t0 = t;
    step.t1 = finishing ? t_end : t + hs;
    step.y0 = y;
    step.y1 = tr->y1;
    step.f0 = tr->k[0];
    step.f1 = tr->k[6];
    const auto& k = tr->k;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double dy = tr->y1[i] - y[i];
      const double bspl = hs * k[0][i] - dy;
      step.rcont_[0][i] = y[i];
      step.rcont_[1][i] = dy;
      step.rcont_[2][i] = bspl;
      step.rcont_[3][i] = dy - hs * k[6][i] - bspl;
      step.rcont_[4][i] = hs * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                                d6 * k[5][i] + d7 * k[6][i]);
    }
    ++res.steps;
    t = step.t1;
    y = tr->y1;
    k1 = tr->k[6];
    res.t = t;
    res.y = y;
    if (obs && !obs(step)) {
      res.stopped_by_observer = true;
      return res;
    }
    if (finishing) return res;
    if (last_rejected) fac = std::min(fac, 1.0);
    last_rejected = false;
    h = std::min(h * fac, h_max);
  }
}

ZeroCrossing integrate_to_zero(const Integrator& integ, double t0, const State& y0,
                               double t_end, const Observer& obs, double t_tol) {
  ZeroCrossing zc;
  if (!(y0[0] > 0.0)) throw DomainError("integrate_to_zero: initial value must be positive");
  std::optional<Step> hit;
  zc.result = integ.integrate(t0, y0, t_end, [&](const Step& s) {
    const bool crossed = s.y1[0] <= 0.0;
    if (crossed) hit = s;
    const bool keep_going = obs ? obs(s) : true;
    return keep_going && !crossed;
  });
  if (!hit) return zc;

  const Step& s = *hit;
  double lo = std::min(s.t0, s.t1);
  double hi = std::max(s.t0, s.t1);
  auto g = [&](double t) { return s.at(t)[0]; };
  double root;
  if (s.y1[0] == 0.0) {
    root = s.t1;
  } else {
    boost::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
    const auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g(lo), g(hi), tol, iters);
    root = 0.5 * (a + b);
  }
  // Newton on exact single steps from the start of the crossing step.
  State y = s.at(root);
  for (int i = 0; i < 8; ++i) {
    y = (root == s.t0) ? s.y0 : integ.single_step(s.t0, s.y0, root - s.t0);
    if (y[1] == 0.0) break;
    const double dt = y[0] / y[1];
    const double next = std::clamp(root - dt, lo, hi);
    const bool done = std::abs(next - root) <= t_tol * std::max(1.0, std::abs(root));
    root = next;
    if (done) {
      y = integ.single_step(s.t0, s.y0, root - s.t0);
      break;
    }
  }
  zc.found = true;
  zc.t = root;
  zc.y = y;
  return zc;
}

}  // namespace gelfand::ode
