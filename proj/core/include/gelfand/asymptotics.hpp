#pragma once

// Closed-form expansions of the singular solution near the origin, written in
// t = ln(1/|x|) for the rescaled profile w(t) = u*(e^{-t}/sqrt(lambda*)), and
// finite checks of their remainder orders against constructed profiles.

#include <functional>
#include <string>

#include "gelfand/transform.hpp"

namespace gelfand::asymptotics {

enum class Depth {
  ansatz,     // ln(2t + phi(t))
  four_term,  // ln 2t + (1/2t) ln((n-2)/t) - (1/8t^2) ln^2(1/t) + (1/4t^2) ln t
};

double expansion_w_m1(int n, double t, Depth depth);

/// 1/(r ln(1/r)) + ln ln(1/r) / (2 r ln^2(1/r)), 0 < r < 1/e.
double expansion_grad_m1(double r);

/// The same expansion multiplied by r, as a function of t = ln(1/r):
/// 1/t + ln t/(2t^2). Usable where r underflows.
double expansion_grad_m1_scaled(double t);

/// H_m(2t) + H'_m(2t)(ln(2(n-2)) - sum_{j=1}^m H_j(2t)) - H'_m(2t) ln^2 t/(4t).
double expansion_w_m(int n, int m, double t);

/// 2 H'_m(2 ln(1/r)) / r.
double expansion_grad_m(int m, double r);
/// r times expansion_grad_m, in t = ln(1/r).
double expansion_grad_m_scaled(int m, double t);

enum class Quantity {
  w,        // profile value w(t)
  abs_w_t,  // |w_t(t)|
};

struct ExpansionReport {
  std::string label;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double order = 0.0;
  double weighted_sup = 0.0;    // sup t^order |numeric - expansion|
  double empirical_slope = 0.0; // log-log slope of |numeric - expansion|
  std::size_t samples = 0;
};

using Evaluator = std::function<double(double)>;

/// Compares `expansion` with the profile on its samples inside [t_lo, t_hi].
/// Throws DomainError for an empty window.
ExpansionReport residual_order(const std::string& label, const transform::LogProfile& profile,
                               const Evaluator& expansion, double order, double t_lo,
                               double t_hi, Quantity q = Quantity::w);

struct WindowStability {
  ExpansionReport base;
  ExpansionReport doubled;  // window [2 t_lo, 2 t_hi]
  double growth() const { return doubled.weighted_sup / base.weighted_sup; }
};

WindowStability window_stability(const std::string& label, const transform::LogProfile& profile,
                                 const Evaluator& expansion, double order, double t_lo,
                                 double t_hi, Quantity q = Quantity::w);

/// Weighted sup may grow by at most this factor under window doubling.
inline constexpr double kStabilityFactor = 1.25;

}  // namespace gelfand::asymptotics
