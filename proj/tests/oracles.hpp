#pragma once

// Reference integrations with Boost.Odeint, independent of the library's
// integrator and variable choices.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace oracle {

using State = std::array<double, 2>;

struct Crossing {
  double x;
  State y;
};

/// Integrates y' = f(x, y) from x0 toward x_end with dense-output DOPRI5 and
/// returns the first point where y[0] reaches 0 (bisection on the dense
/// output). x_end may lie on either side of x0.
inline Crossing first_zero(const std::function<void(const State&, State&, double)>& f, double x0,
                           State y0, double x_end, double tol = 1e-13) {
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State>());
  const double dir = x_end > x0 ? 1.0 : -1.0;
  stepper.initialize(y0, x0, dir * 1e-4);
  while (dir * (stepper.current_time() - x_end) < 0) {
    stepper.do_step(f);
    if (stepper.current_state()[0] <= 0.0) {
      double a = stepper.previous_time();
      double b = stepper.current_time();
      State s{};
      for (int i = 0; i < 200 && std::abs(b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++i) {
        const double mid = 0.5 * (a + b);
        stepper.calc_state(mid, s);
        (s[0] > 0.0 ? a : b) = mid;
      }
      stepper.calc_state(b, s);
      return {b, s};
    }
  }
  return {x_end, stepper.current_state()};
}

/// Regular radial solution v'' + (n-1)/r v' + exp(G_k(v)) = 0, v(0) = rho,
/// integrated in r. Returns R with v(R) = 0, so lambda = R^2.
struct RadialStart {
  double r0;
  State y0;
  std::function<void(const State&, State&, double)> rhs;
};

inline RadialStart radial_start(int n, int k, double rho) {
  auto g = [k](double v) {
    double x = v;
    for (int j = 0; j < k; ++j) x = std::exp(x);
    return x;
  };
  const double src = std::exp(g(rho));
  const double r0 = 1e-4 / std::sqrt(src);
  return {r0,
          {rho - src * r0 * r0 / (2 * n), -src * r0 / n},
          [n, g](const State& y, State& dy, double r) {
            dy[0] = y[1];
            dy[1] = -(n - 1) / r * y[1] - std::exp(g(y[0]));
          }};
}

inline double regular_radius(int n, int k, double rho) {
  const auto s = radial_start(n, k, rho);
  return first_zero(s.rhs, s.r0, s.y0, 100.0).x;
}

/// v_rho at increasing radii r_i > r0.
inline std::vector<double> regular_values(int n, int k, double rho, const std::vector<double>& r) {
  namespace odeint = boost::numeric::odeint;
  const auto s = radial_start(n, k, rho);
  std::vector<double> times{s.r0};
  times.insert(times.end(), r.begin(), r.end());
  std::vector<double> out;
  State y = s.y0;
  odeint::integrate_times(odeint::make_dense_output(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>()),
                          s.rhs, y, times.begin(), times.end(), 1e-6,
                          [&](const State& st, double) { out.push_back(st[0]); });
  out.erase(out.begin());
  return out;
}

}  // namespace oracle
