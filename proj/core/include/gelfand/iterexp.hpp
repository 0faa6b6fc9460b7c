#pragma once

// Iterated exponentials G_m, iterated logarithms H_m, their derivatives, and
// the tail integral F(t) = int_t^inf exp(-e^s) ds.
//
//   G_0(y) = y,  G_m(y) = exp(G_{m-1}(y))
//   H_0(y) = y,  H_m(y) = ln(H_{m-1}(y))
//
// Tower evaluations that leave double range return an out-of-range TowerResult
// instead of an infinity; callers must rescale rather than propagate.

namespace gelfand::iterexp {

/// Value or out-of-range marker for a tower evaluation.
class TowerResult {
 public:
  static TowerResult of(double v) { return TowerResult(v, false); }
  static TowerResult out_of_range() { return TowerResult(0.0, true); }

  bool ok() const noexcept { return !overflow_; }
  explicit operator bool() const noexcept { return ok(); }

  /// The value; throws OverflowError when out of range.
  double value() const;
  double operator*() const { return value(); }

 private:
  TowerResult(double v, bool overflow) : value_(v), overflow_(overflow) {}
  double value_;
  bool overflow_;
};

/// Largest argument accepted by exp() without overflow.
inline constexpr double kMaxExpArgument = 709.782712893384;

TowerResult g_tower(int m, double y);

/// Minimal y for which H_m(y) is defined: H_m needs H_{m-1}(y) > 0, i.e.
/// y > G_{m-1}(0). Returns -infinity for m = 0.
double tower_lower(int m);

/// Iterated logarithm. Throws DomainError (with level j) when H_j(y) <= 0
/// for some j < m.
double h_tower(int m, double y);

struct Derivatives {
  double value;
  double d1;
  double d2;
  double d3;
};

/// H_m and its first three derivatives at t, from
///   H'_m = prod_{j<m} 1/H_j,
///   H''_m = -H'_m sum_{j<m} H'_j/H_j,
///   H'''_m = -H''_m sum H'_j/H_j + H'_m sum [(H'_j/H_j)^2 - H''_j/H_j].
Derivatives h_derivatives(int m, double t);

/// k-th derivative (k in {1,2,3}) of H_m at t.
double h_deriv(int m, int k, double t);

/// G_m and its first three derivatives at y by the chain rule
/// (G'_m = prod_{j=1}^m G_j). Out of range if any level overflows.
struct TowerDerivatives {
  TowerResult value;
  TowerResult d1;
  TowerResult d2;
  TowerResult d3;
};
TowerDerivatives g_derivatives(int m, double y);

/// k-th derivative (k in {1,2,3}) of G_m at y; requires m >= 1.
TowerResult g_deriv(int m, int k, double y);

/// F(t) = int_t^inf exp(-e^s) ds = E1(e^t). Underflows to 0 near t ~ 6.5;
/// use log_f_tail beyond that.
double f_tail(double t);

/// ln F(t), accurate for all t where e^t is finite.
double log_f_tail(double t);

/// F^{-1}(x) for x > 0.
double f_tail_inverse(double x);

/// F^{-1}(exp(log_x)); accepts arguments whose exponential underflows.
double f_tail_inverse_log(double log_x);

}  // namespace gelfand::iterexp
