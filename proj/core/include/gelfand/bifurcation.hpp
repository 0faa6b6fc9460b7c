#pragma once

// Regular branch lambda(rho) of -Delta u = lambda exp(G_m(u)) on the unit
// ball, parameterised by rho = u(0) = max u. Each point is obtained by
// shooting v'' + (n-1)/r v' + exp(G_m(v)) = 0, v(0) = rho, v'(0) = 0 to its
// first zero R; then lambda = R^2. Integration runs in t = -ln r.

#include <optional>
#include <span>
#include <vector>

#include "gelfand/problem.hpp"
#include "gelfand/shooting.hpp"
#include "gelfand/transform.hpp"

namespace gelfand::bifurcation {

struct ShootOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double start_scale = 1e-4;  // exp(G_m(rho) - 2 t0) at the series start
  bool keep_profile = true;
  double sample_dt = 0.01;    // 0: step endpoints only
};

struct BranchPoint {
  double rho = 0.0;
  double R = 0.0;
  double lambda = 0.0;
  double t_zero = 0.0;   // -ln R
  double t_start = 0.0;  // series hand-off point
  bool monotone = true;
  /// v in log variables (t = -ln r) on [t_zero, t_start], if kept.
  transform::LogProfile profile;

  /// v(r) on [0 < r <= R] as a radial profile with lambda = R^2.
  transform::RadialProfile radial() const;
  /// v at log-coordinate t, continuing with the centre series past t_start.
  transform::LogSample at(const ProblemSpec& p, double t) const;
};

/// Largest rho with G_m(rho) <= 4000.
double max_safe_rho(const ProblemSpec& p);

BranchPoint shoot_regular(const ProblemSpec& p, double rho, const ShootOptions& opts = {});

struct TurningPoint {
  double rho;
  double lambda;
  std::optional<double> offset;  // lambda - lambda*
};

struct BifurcationCurve {
  std::vector<BranchPoint> points;
  std::vector<TurningPoint> turning_points;
  std::optional<double> lambda_star_ref;

  std::vector<double> rho() const;
  std::vector<double> lambda() const;
};

/// Points are stored without profiles.
BifurcationCurve trace_curve(const ProblemSpec& p, std::span<const double> rho_grid,
                             std::optional<double> lambda_star = std::nullopt,
                             ShootOptions opts = {});

/// Local extrema of lambda(rho): sign changes of the interval slopes (changes
/// below a relative noise floor are ignored), each refined by the vertex of the
/// quadratic through the three neighbouring points.
std::vector<TurningPoint> turning_points(std::span<const double> rho,
                                         std::span<const double> lambda,
                                         std::optional<double> lambda_star = std::nullopt);
std::vector<TurningPoint> turning_points(const BifurcationCurve& curve);

enum class IntersectionMethod {
  automatic,    // variational when |t_zero - t_star| <= kVariationalSwitch
  direct,       // sign changes of w_rho(s + t_zero) - w*(s + t_star)
  variational,  // difference equation for D = w_rho - w* at equal t
};

/// Above this boundary shift the direct difference is well resolved.
inline constexpr double kVariationalSwitch = 1e-6;

/// Number of sign changes of u_rho(x) - u*(x) for 0 < |x| < 1, counted on a
/// fine grid in s = -ln|x| and confirmed by bisection. When the two boundary
/// zeros nearly coincide the direct difference is pure rounding noise near
/// the boundary; the variational route integrates
///   D_tt - (n-2) D_t + exp(G_m(w*) - 2t) expm1(G_m(w* + D) - G_m(w*)) = 0
/// for D = e^{kappa t} Y (kappa = (n-2)/2) from the centre layer down to t*,
/// and uses u_rho - u* ~ D(t) + (t_zero - t_star) w*_t(t), with the shift
/// itself recovered from D(t_star). Throws DomainError for coincident
/// (non-transversal) profiles or non-overlapping ranges.
struct IntersectionResult {
  int count = 0;
  IntersectionMethod method = IntersectionMethod::direct;
  /// t_zero - t_star: measured (direct) or recovered from D(t_star).
  double shift = 0.0;
};

IntersectionResult intersections(const ProblemSpec& p, const BranchPoint& point,
                                 const shooting::SingularSolution& singular,
                                 IntersectionMethod method = IntersectionMethod::automatic);

inline int intersection_count(const ProblemSpec& p, const BranchPoint& point,
                              const shooting::SingularSolution& singular,
                              IntersectionMethod method = IntersectionMethod::automatic) {
  return intersections(p, point, singular, method).count;
}

/// Log-spaced on [1e-3, 1], then linear with step `step` up to rho_max.
std::vector<double> default_rho_grid(double rho_max, double step = 0.005);

}  // namespace gelfand::bifurcation
