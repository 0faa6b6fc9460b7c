#include "gelfand/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "gelfand/error.hpp"
#include "gelfand/iterexp.hpp"
#include "gelfand/numeric.hpp"
#include "gelfand/ode.hpp"

namespace gelfand::bifurcation {

using transform::LogProfile;
using transform::LogSample;

namespace {

constexpr double kSafeTower = 4000.0;

struct CentreSeries {
  double g;    // G_m(rho)
  double g1;   // G'_m(rho)
  int n;
  double rho;

  // E = exp(G_m(rho) - 2t).
  LogSample at(double t) const {
    const double e = std::exp(g - 2.0 * t);
    const double w = rho - e / (2.0 * n) + g1 * e * e / (8.0 * n * (n + 2.0));
    const double wt = e / n - g1 * e * e / (2.0 * n * (n + 2.0));
    return {t, w, wt};
  }
};

CentreSeries centre_series(const ProblemSpec& p, double rho) {
  const int k = p.effective_height();
  const auto d = iterexp::g_derivatives(k, rho);
  if (!d.value || !d.d1 || *d.value > kSafeTower) {
    throw OverflowError("shoot_regular: G_m(rho) beyond the safe range");
  }
  return {*d.value, *d.d1, p.n, rho};
}

}  // namespace

transform::RadialProfile BranchPoint::radial() const {
  transform::RadialProfile out;
  out.lambda = lambda;
  for (auto it = profile.samples().rbegin(); it != profile.samples().rend(); ++it) {
    const double r = std::exp(-it->t);
    out.samples.push_back({r, it->w, -it->w_t / r});
  }
  std::reverse(out.samples.begin(), out.samples.end());
  return out;
}

LogSample BranchPoint::at(const ProblemSpec& p, double t) const {
  if (profile.covers(t)) return profile.at(t);
  if (t > t_start) return centre_series(p, rho).at(t);
  throw DomainError("BranchPoint: t below the zero of v");
}

double max_safe_rho(const ProblemSpec& p) {
  const int k = p.effective_height();
  double y = kSafeTower;
  for (int j = 0; j < k; ++j) y = std::log(y);
  return y;
}

BranchPoint shoot_regular(const ProblemSpec& p, double rho, const ShootOptions& opts) {
  if (!(rho > 0.0)) throw DomainError("shoot_regular: rho must be positive");
  const CentreSeries cs = centre_series(p, rho);
  // Small start values keep the truncated series below the integrator tolerance.
  const double e0 = std::min(opts.start_scale, 1e-2 * rho) / std::max(1.0, cs.g1);
  const double t0 = 0.5 * (cs.g - std::log(e0));
  const LogSample s0 = cs.at(t0);

  const int c = p.n - 2;
  const ode::Integrator integ(
      [&p, c](double t, const ode::State& y) -> ode::State {
        return {y[1], c * y[1] - source_term(p, t, y[0])};
      },
      ode::Options{opts.rtol, opts.atol, 0.0, 0.0, 5'000'000});

  std::vector<LogSample> down{s0};
  long k = 1;
  bool monotone = true;
  const auto zc = ode::integrate_to_zero(
      integ, t0, {s0.w, s0.w_t}, t0 - 1e4, [&](const ode::Step& s) {
        if (s.y1[1] <= 0.0 && s.y1[0] > 0.0) monotone = false;
        if (!opts.keep_profile) return true;
        if (opts.sample_dt > 0.0) {
          while (true) {
            const double tk = t0 - k * opts.sample_dt;
            if (tk < s.t1) break;
            const auto y = s.at(tk);
            down.push_back({tk, y[0], y[1]});
            ++k;
          }
        } else {
          down.push_back({s.t1, s.y1[0], s.y1[1]});
        }
        return true;
      });
  if (!zc.found) throw ConvergenceError("shoot_regular: no zero of v found");

  BranchPoint bp;
  bp.rho = rho;
  bp.t_zero = zc.t;
  bp.t_start = t0;
  bp.R = std::exp(-zc.t);
  bp.lambda = std::exp(-2.0 * zc.t);
  bp.monotone = monotone;
  if (opts.keep_profile) {
    const double dt = opts.sample_dt > 0.0 ? opts.sample_dt : 0.0;
    while (down.size() > 1 && down.back().t <= zc.t + 0.1 * dt) down.pop_back();
    down.push_back({zc.t, 0.0, zc.y[1]});
    std::reverse(down.begin(), down.end());
    bp.monotone = bp.monotone && std::all_of(down.begin(), down.end(),
                                             [](const LogSample& s) { return s.w_t > 0.0; });
    bp.profile = LogProfile(std::move(down));
  }
  return bp;
}

std::vector<double> BifurcationCurve::rho() const {
  std::vector<double> v;
  for (const auto& pt : points) v.push_back(pt.rho);
  return v;
}

std::vector<double> BifurcationCurve::lambda() const {
  std::vector<double> v;
  for (const auto& pt : points) v.push_back(pt.lambda);
  return v;
}

BifurcationCurve trace_curve(const ProblemSpec& p, std::span<const double> rho_grid,
                             std::optional<double> lambda_star, ShootOptions opts) {
  if (rho_grid.empty()) throw DomainError("trace_curve: empty rho grid");
  for (std::size_t i = 1; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > rho_grid[i - 1])) throw DomainError("trace_curve: rho grid must increase");
  }
  opts.keep_profile = false;
  BifurcationCurve curve;
  curve.lambda_star_ref = lambda_star;
  for (double rho : rho_grid) curve.points.push_back(shoot_regular(p, rho, opts));
  if (curve.points.size() >= 3) curve.turning_points = turning_points(curve);
  return curve;
}

std::vector<TurningPoint> turning_points(std::span<const double> rho,
                                         std::span<const double> lambda,
                                         std::optional<double> lambda_star) {
  const std::size_t n = rho.size();
  if (lambda.size() != n) throw DomainError("turning_points: size mismatch");
  std::vector<TurningPoint> out;
  if (n < 3) return out;
  constexpr double kNoise = 1e-10;
  // Sign of each interval slope; 0 for changes below the noise floor.
  std::vector<int> sign(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = lambda[i + 1] - lambda[i];
    const double floor = kNoise * std::max(std::abs(lambda[i]), std::abs(lambda[i + 1]));
    sign[i] = (std::abs(d) <= floor) ? 0 : (d > 0 ? 1 : -1);
  }
  std::size_t prev = n;  // last interval with a nonzero sign
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (sign[i] == 0) continue;
    if (prev != n && sign[i] != sign[prev]) {
      // Extremum at the node between the two intervals with the largest |lambda - mean|.
      std::size_t c = prev + 1;
      for (std::size_t j = prev + 1; j <= i; ++j) {
        const bool better = sign[prev] > 0 ? lambda[j] > lambda[c] : lambda[j] < lambda[c];
        if (better) c = j;
      }
      c = std::clamp<std::size_t>(c, 1, n - 2);
      const double x0 = rho[c - 1], x1 = rho[c], x2 = rho[c + 1];
      const double y0 = lambda[c - 1], y1 = lambda[c], y2 = lambda[c + 1];
      const double d1 = (y1 - y0) / (x1 - x0);
      const double d2 = (y2 - y1) / (x2 - x1);
      const double a = (d2 - d1) / (x2 - x0);
      double xv = x1;
      double yv = y1;
      if (a != 0.0) {
        const double b = d1 - a * (x0 + x1);
        xv = -b / (2.0 * a);
        if (xv < x0 || xv > x2) {
          xv = x1;
        } else {
          yv = y1 + (xv - x1) * (d1 + a * (xv - x0));
        }
      }
      TurningPoint tp{xv, yv, std::nullopt};
      if (lambda_star) tp.offset = yv - *lambda_star;
      out.push_back(tp);
    }
    prev = i;
  }
  return out;
}

std::vector<TurningPoint> turning_points(const BifurcationCurve& curve) {
  const auto r = curve.rho();
  const auto l = curve.lambda();
  return turning_points(r, l, curve.lambda_star_ref);
}

namespace {

// Counts sign changes of f on [s_lo, s_hi]; values within `floor` of zero
// carry no sign. Each change is confirmed by bisection.
int count_sign_changes(const std::function<double(double)>& f, double s_lo, double s_hi,
                       double ds, double floor, double& max_abs) {
  const int steps = static_cast<int>(std::ceil((s_hi - s_lo) / ds));
  auto sign_of = [floor](double v) { return (std::abs(v) <= floor) ? 0 : (v > 0 ? 1 : -1); };
  double last_s = s_lo;
  double last_v = f(s_lo);
  int last_sign = sign_of(last_v);
  max_abs = std::abs(last_v);
  int count = 0;
  for (int i = 1; i <= steps; ++i) {
    const double s = std::min(s_hi, s_lo + i * ds);
    const double v = f(s);
    max_abs = std::max(max_abs, std::abs(v));
    const int sg = sign_of(v);
    if (sg == 0) continue;
    if (last_sign != 0 && sg != last_sign) {
      double a = last_s, b = s;
      double fa = last_v;
      for (int k = 0; k < 80 && b - a > 1e-13 * std::max(1.0, std::abs(b)); ++k) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fm > 0) == (fa > 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      if ((f(a) > 0) != (f(b) > 0)) ++count;
    }
    last_sign = sg;
    last_s = s;
    last_v = v;
  }
  return count;
}

constexpr double kScanStep = 2e-3;
constexpr double kScanStart = 1e-2;

}  // namespace

IntersectionResult intersections(const ProblemSpec& p, const BranchPoint& point,
                                 const shooting::SingularSolution& singular,
                                 IntersectionMethod method) {
  if (point.profile.empty()) throw DomainError("intersection_count: branch point has no profile");
  const auto& ws = singular.profile;
  const double t_star = singular.t_star;
  const double s_hi = ws.t_max() - t_star;
  if (!(s_hi > kScanStart)) throw DomainError("intersection_count: profiles do not overlap");
  const double shift = point.t_zero - t_star;
  if (method == IntersectionMethod::automatic) {
    method = (std::abs(shift) > kVariationalSwitch) ? IntersectionMethod::direct
                                                    : IntersectionMethod::variational;
  }
  auto direct = [&](double s) { return point.at(p, s + point.t_zero).w - ws.at(s + t_star).w; };

  double max_abs = 0.0;
  if (method == IntersectionMethod::direct) {
    constexpr double kNoise = 1e-9;
    const int count = count_sign_changes(direct, kScanStart, s_hi, kScanStep, kNoise, max_abs);
    if (max_abs < kNoise) throw DomainError("intersection_count: coincident profiles");
    return {count, method, shift};
  }

  const int k = p.effective_height();
  const double kappa = 0.5 * (p.n - 2);
  const double t_h = std::min(point.t_start, ws.t_max());
  if (!(t_h > t_star + kScanStart)) throw DomainError("intersection_count: profiles do not overlap");

  auto levels = [k](double w) {
    std::vector<double> g(k + 1);
    g[0] = w;
    for (int j = 1; j <= k; ++j) {
      const auto v = iterexp::g_tower(1, g[j - 1]);
      if (!v) throw OverflowError("intersection_count: tower overflow");
      g[j] = *v;
    }
    return g;
  };
  // e^{-kappa tau} expm1(G_k(w + D) - G_k(w)) with D = e^{kappa tau} Y.
  auto scaled_jump = [&](double w, double tau, double y) {
    const auto g = levels(w);
    if (kappa * tau < -30.0) {
      double g1 = 1.0;
      for (int j = 1; j <= k; ++j) g1 *= g[j];
      return g1 * y;
    }
    double delta = std::exp(kappa * tau) * y;
    for (int j = 1; j <= k; ++j) delta = g[j] * std::expm1(delta);
    return std::expm1(delta) * std::exp(-kappa * tau);
  };

  const ode::Integrator integ(
      [&](double t, const ode::State& y) -> ode::State {
        const double w = ws.at(t).w;
        const double n_star = source_term(p, t, w);
        return {y[1], kappa * kappa * y[0] - n_star * scaled_jump(w, t - t_h, y[0])};
      },
      ode::Options{1e-12, 1e-300, 0.0, 0.5, 5'000'000});

  const auto a = point.at(p, t_h);
  const auto b = ws.at(t_h);
  const double d0 = a.w - b.w;
  const double d0_t = a.w_t - b.w_t;
  std::vector<ode::Step> steps;
  const auto res = integ.integrate(t_h, {d0, d0_t - kappa * d0}, t_star, [&](const ode::Step& s) {
    steps.push_back(s);
    return true;
  });
  std::reverse(steps.begin(), steps.end());  // ascending in t
  auto y_at = [&](double t) {
    auto it = std::lower_bound(steps.begin(), steps.end(), t,
                               [](const ode::Step& s, double v) { return s.t0 < v; });
    if (it == steps.end()) --it;
    return it->at(t);
  };
  const double y_star = res.y[0];
  const double c_hat = -y_star / ws.at(t_star).w_t;

  // z e^{-kappa (t - t_h)}, where z = u_rho - u* at ball coordinate s = t - t_star.
  auto zhat = [&](double s) {
    const double t = s + t_star;
    if (t >= t_h) return direct(s) * std::exp(-kappa * (t - t_h));
    const double y = y_at(t)[0];
    return y + c_hat * std::exp(kappa * (t_star - t)) * ws.at(t).w_t;
  };
  double y_scale = std::abs(d0);
  for (const auto& s : steps) y_scale = std::max(y_scale, std::abs(s.y0[0]));
  const double floor = 1e-10 * y_scale;
  const int count = count_sign_changes(zhat, kScanStart, s_hi, kScanStep, floor, max_abs);
  if (max_abs < floor) throw DomainError("intersection_count: coincident profiles");
  // delta = -D(t*)/w*_t(t*), D(t*) = e^{kappa (t* - t_h)} Y(t*)
  return {count, method, c_hat * std::exp(kappa * (t_star - t_h))};
}

std::vector<double> default_rho_grid(double rho_max, double step) {
  if (!(rho_max > 1e-3) || !(step > 0.0)) throw DomainError("default_rho_grid: empty grid");
  std::vector<double> g;
  const int nlog = 40;
  for (int i = 0; i < nlog; ++i) {
    const double r = std::pow(10.0, -3.0 + 3.0 * i / nlog);
    if (r > rho_max) return g;
    g.push_back(r);
  }
  const int nlin = static_cast<int>(std::floor((rho_max - 1.0) / step + 1e-9));
  for (int i = 0; i <= nlin; ++i) g.push_back(1.0 + i * step);
  return g;
}

}  // namespace gelfand::bifurcation
