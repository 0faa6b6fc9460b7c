#include "gelfand/asymptotics.hpp"

#include <cmath>
#include <vector>

#include "gelfand/error.hpp"
#include "gelfand/fixedpoint.hpp"
#include "gelfand/iterexp.hpp"
#include "gelfand/numeric.hpp"

namespace gelfand::asymptotics {

double expansion_w_m1(int n, double t, Depth depth) {
  if (!(t > 1.0)) throw DomainError("expansion_w_m1: requires t > 1");
  if (depth == Depth::ansatz) {
    return std::log(2.0 * t + fixedpoint::phi_m1(n, t).phi);
  }
  const double lt = std::log(t);
  return std::log(2.0 * t) + std::log((n - 2) / t) / (2.0 * t) - lt * lt / (8.0 * t * t) +
         lt / (4.0 * t * t);
}

double expansion_grad_m1(double r) {
  if (!(r > 0.0) || !(r < std::exp(-1.0))) {
    throw DomainError("expansion_grad_m1: requires 0 < r < 1/e");
  }
  return expansion_grad_m1_scaled(-std::log(r)) / r;
}

double expansion_grad_m1_scaled(double t) {
  if (!(t > 1.0)) throw DomainError("expansion_grad_m1: requires t > 1");
  return 1.0 / t + std::log(t) / (2.0 * t * t);
}

double expansion_w_m(int n, int m, double t) {
  if (m < 2) throw DomainError("expansion_w_m: requires m >= 2");
  const double y = 2.0 * t;
  const auto d = iterexp::h_derivatives(m, y);
  double sum = 0.0;
  double h = y;
  for (int j = 1; j <= m; ++j) {
    h = std::log(h);
    sum += h;
  }
  const double lt = std::log(t);
  return d.value + d.d1 * (std::log(2.0 * (n - 2)) - sum) - d.d1 * lt * lt / (4.0 * t);
}

double expansion_grad_m_scaled(int m, double t) {
  if (m < 1) throw DomainError("expansion_grad_m: requires m >= 1");
  return 2.0 * iterexp::h_deriv(m, 1, 2.0 * t);
}

double expansion_grad_m(int m, double r) {
  if (!(r > 0.0) || !(r < 1.0)) throw DomainError("expansion_grad_m: requires 0 < r < 1");
  return expansion_grad_m_scaled(m, -std::log(r)) / r;
}

ExpansionReport residual_order(const std::string& label, const transform::LogProfile& profile,
                               const Evaluator& expansion, double order, double t_lo,
                               double t_hi, Quantity q) {
  if (!(t_hi > t_lo)) throw DomainError("residual_order: empty window");
  if (profile.empty() || t_lo < profile.t_min() || t_hi > profile.t_max()) {
    throw DomainError("residual_order: window outside profile range");
  }
  ExpansionReport rep;
  rep.label = label;
  rep.t_lo = t_lo;
  rep.t_hi = t_hi;
  rep.order = order;
  std::vector<double> lx, ly;
  for (const auto& s : profile.samples()) {
    if (s.t < t_lo || s.t > t_hi) continue;
    const double value = (q == Quantity::w) ? s.w : std::abs(s.w_t);
    const double d = std::abs(value - expansion(s.t));
    rep.weighted_sup = std::max(rep.weighted_sup, std::pow(s.t, order) * d);
    ++rep.samples;
    if (d > 0.0) {
      lx.push_back(std::log(s.t));
      ly.push_back(std::log(d));
    }
  }
  if (rep.samples == 0) throw DomainError("residual_order: no samples in window");
  rep.empirical_slope = numeric::linear_fit_slope(lx, ly);
  return rep;
}

WindowStability window_stability(const std::string& label, const transform::LogProfile& profile,
                                 const Evaluator& expansion, double order, double t_lo,
                                 double t_hi, Quantity q) {
  return {residual_order(label, profile, expansion, order, t_lo, t_hi, q),
          residual_order(label, profile, expansion, order, 2.0 * t_lo, 2.0 * t_hi, q)};
}

}  // namespace gelfand::asymptotics
