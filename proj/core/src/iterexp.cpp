#include "gelfand/iterexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gelfand/error.hpp"

namespace gelfand::iterexp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_height(int m) {
  if (m < 0) throw DomainError("tower height must be non-negative");
}

// Series E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k k!), x <= 1,
// written with ln x = t.
double f_tail_series(double t) {
  const double x = std::exp(t);
  double term = 1.0;  // x^k / k!
  double sum = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= x / k;
    const double c = term / k;
    sum += (k % 2 == 1) ? c : -c;
    if (c < 1e-18 * std::abs(sum)) break;
  }
  return -std::numbers::egamma - t + sum;
}

// ln(E1(x) e^x) by modified Lentz on the continued fraction
// E1(x) e^x = 1/(x+1- 1/(x+3- 4/(x+5- ...))), valid for x > 1.
double log_scaled_e1_cf(double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::log(h);
}

// ln(sum_k (-1)^k k!/x^k), truncated at the smallest term; x >= 50.
double log_asymptotic_factor(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double next = term * k / x;
    if (next > term) break;
    term = next;
    sum += (k % 2 == 1) ? -term : term;
    if (term < 1e-18) break;
  }
  return std::log(sum);
}

constexpr double kAsymptoticThreshold = 50.0;

}  // namespace

double TowerResult::value() const {
  if (overflow_) throw OverflowError("iterated exponential out of double range");
  return value_;
}

TowerResult g_tower(int m, double y) {
  require_height(m);
  double g = y;
  for (int j = 0; j < m; ++j) {
    if (g > kMaxExpArgument) return TowerResult::out_of_range();
    g = std::exp(g);
  }
  if (!std::isfinite(g)) return TowerResult::out_of_range();
  return TowerResult::of(g);
}

double tower_lower(int m) {
  require_height(m);
  if (m == 0) return -kInf;
  const TowerResult g = g_tower(m - 1, 0.0);
  return g ? g.value() : kInf;
}

double h_tower(int m, double y) {
  require_height(m);
  double h = y;
  for (int j = 0; j < m; ++j) {
    if (!(h > 0.0)) {
      throw DomainError("iterated logarithm H_" + std::to_string(m) +
                            " undefined: H_" + std::to_string(j) + "(y) <= 0",
                        j);
    }
    h = std::log(h);
  }
  return h;
}

Derivatives h_derivatives(int m, double t) {
  require_height(m);
  // Level-by-level H_j, H'_j, H''_j for j < m.
  double hj = t;
  double d1j = 1.0;
  double d2j = 0.0;
  double sum1 = 0.0;  // sum_{j<m} H'_j/H_j
  double sum2 = 0.0;  // sum_{j<m} (H'_j/H_j)^2 - H''_j/H_j
  for (int j = 0; j < m; ++j) {
    if (!(hj > 0.0)) {
      throw DomainError("iterated logarithm H_" + std::to_string(m) +
                            " undefined: H_" + std::to_string(j) + "(t) <= 0",
                        j);
    }
    const double q = d1j / hj;
    sum1 += q;
    sum2 += q * q - d2j / hj;
    // Next level from the product identities applied at height j + 1.
    const double next_d1 = d1j / hj;
    const double next_d2 = -next_d1 * sum1;
    hj = std::log(hj);
    d1j = next_d1;
    d2j = next_d2;
  }
  const double d1 = d1j;
  const double d2 = -d1 * sum1;
  const double d3 = -d2 * sum1 + d1 * sum2;
  return {hj, d1, d2, d3};
}

double h_deriv(int m, int k, double t) {
  const Derivatives d = h_derivatives(m, t);
  switch (k) {
    case 1: return d.d1;
    case 2: return d.d2;
    case 3: return d.d3;
    default: throw DomainError("h_deriv: order must be 1, 2 or 3");
  }
}

TowerDerivatives g_derivatives(int m, double y) {
  require_height(m);
  const auto bad = TowerResult::out_of_range();
  double g = y;
  double d1 = 1.0;
  double d2 = 0.0;
  double d3 = 0.0;
  for (int j = 1; j <= m; ++j) {
    if (g > kMaxExpArgument) return {bad, bad, bad, bad};
    g = std::exp(g);
    const double n1 = g * d1;
    const double n2 = g * (d1 * d1 + d2);
    const double n3 = g * (d1 * d1 * d1 + 3.0 * d1 * d2 + d3);
    d1 = n1;
    d2 = n2;
    d3 = n3;
  }
  auto wrap = [](double v) {
    return std::isfinite(v) ? TowerResult::of(v) : TowerResult::out_of_range();
  };
  return {wrap(g), wrap(d1), wrap(d2), wrap(d3)};
}

TowerResult g_deriv(int m, int k, double y) {
  if (m < 1) throw DomainError("g_deriv requires m >= 1");
  const TowerDerivatives d = g_derivatives(m, y);
  switch (k) {
    case 1: return d.d1;
    case 2: return d.d2;
    case 3: return d.d3;
    default: throw DomainError("g_deriv: order must be 1, 2 or 3");
  }
}

double log_f_tail(double t) {
  if (std::isnan(t)) return t;
  if (t <= 0.0) return std::log(f_tail_series(t));
  if (t > kMaxExpArgument) return -kInf;
  const double x = std::exp(t);
  if (x <= kAsymptoticThreshold) return -x + log_scaled_e1_cf(x);
  return -x - t + log_asymptotic_factor(x);
}

double f_tail(double t) {
  if (t <= 0.0) return f_tail_series(t);
  return std::exp(log_f_tail(t));
}

double f_tail_inverse_log(double log_x) {
  if (!std::isfinite(log_x)) {
    throw DomainError("f_tail_inverse: argument out of range");
  }
  // For t -> -inf, F(t) ~ -t - gamma; the inverse then needs e^{log_x} finite.
  if (log_x > kMaxExpArgument) {
    throw DomainError("f_tail_inverse: argument out of range");
  }
  auto g = [log_x](double t) { return log_f_tail(t) - log_x; };
  // d/dt ln F = -exp(-e^t) / F(t)
  auto dg = [](double t) {
    const double lf = log_f_tail(t);
    const double ex = (t > kMaxExpArgument) ? kInf : std::exp(t);
    return -std::exp(-ex - lf);
  };

  double t0;
  const double log_f0 = std::log(f_tail_series(0.0));
  if (log_x >= log_f0) {
    t0 = -std::numbers::egamma - std::exp(log_x);
    if (t0 > 0.0) t0 = 0.0;
  } else {
    t0 = std::log(std::max(-log_x, 1e-3));
  }

  double lo = t0 - 1.0;
  double hi = t0 + 1.0;
  double step = 1.0;
  for (int i = 0; i < 200 && !(g(lo) > 0.0); ++i) {
    step *= 2.0;
    lo = t0 - step;
  }
  step = 1.0;
  for (int i = 0; i < 200 && !(g(hi) < 0.0); ++i) {
    step *= 2.0;
    hi = t0 + step;
  }
  if (!(g(lo) > 0.0) || !(g(hi) < 0.0)) {
    throw DomainError("f_tail_inverse: could not bracket root");
  }

  double t = std::clamp(t0, lo, hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double gt = g(t);
    if (gt == 0.0) return t;
    if (gt > 0.0) lo = t; else hi = t;
    const double d = dg(t);
    double next = t - gt / d;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    const double dt = next - t;
    t = next;
    if (std::abs(dt) <= 4e-16 * std::max(1.0, std::abs(t)) ||
        hi - lo <= 4e-16 * std::max(1.0, std::abs(t))) {
      return t;
    }
  }
  throw ConvergenceError("f_tail_inverse: Newton iteration did not converge");
}

double f_tail_inverse(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("f_tail_inverse: argument must be positive and finite");
  }
  return f_tail_inverse_log(std::log(x));
}

}  // namespace gelfand::iterexp
