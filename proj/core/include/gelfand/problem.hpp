#pragma once

// Problem parameters shared by the construction, shooting and verification
// modules: dimension n, tower height m and the nonlinearity selector.

#include <string>

namespace gelfand {

enum class Nonlinearity {
  tower,    // exp(G_m(u))
  gelfand,  // plain e^u (exact-solution oracle)
};

struct ProblemSpec {
  int n = 3;
  int m = 1;
  Nonlinearity nonlinearity = Nonlinearity::tower;

  /// Height of the exponent tower actually used: exp(G_k(u)) with k = m for
  /// the tower problem and k = 0 in oracle mode.
  int effective_height() const { return nonlinearity == Nonlinearity::gelfand ? 0 : m; }

  bool oracle() const { return nonlinearity == Nonlinearity::gelfand; }

  /// Throws DomainError unless n >= 3 and m >= 1.
  void validate() const;

  std::string describe() const;
};

/// exp(G_k(w) - 2t), the forcing term of the log-variable ODE
///   w_tt - (n-2) w_t + exp(G_k(w) - 2t) = 0,
/// with the exponent difference formed before exponentiating. Throws
/// OverflowError when G_k(w) or the result leaves double range.
double source_term(const ProblemSpec& p, double t, double w);

/// Residual w_tt - (n-2) w_t + exp(G_k(w) - 2t) scaled by the largest of the
/// three term magnitudes.
double relative_residual(const ProblemSpec& p, double t, double w, double w_t, double w_tt);

}  // namespace gelfand
