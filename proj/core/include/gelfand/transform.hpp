#pragma once

// Coordinate changes between the ball variables (r, u), the rescaled
// variables v(x) = u(x / sqrt(lambda)), and the Emden-Fowler variables
// t = -ln r, w(t) = v(r).
//
// With r the ball radius of u:  t = -ln(r sqrt(lambda)),  w = u,  w_t = -r u_r.

#include <iosfwd>
#include <vector>

namespace gelfand::transform {

struct RadialSample {
  double r;
  double u;
  double u_r;
};

/// Samples of u on the unit ball for a given lambda. Radii are strictly
/// monotone; a boundary-complete profile has u(1) = 0.
struct RadialProfile {
  double lambda = 1.0;
  std::vector<RadialSample> samples;
};

struct LogSample {
  double t;
  double w;
  double w_t;
};

/// Samples of w(t) on a strictly increasing t grid, with derivative data
/// carried from the ODE rather than re-differenced.
class LogProfile {
 public:
  LogProfile() = default;
  explicit LogProfile(std::vector<LogSample> samples);

  const std::vector<LogSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  double t_min() const;
  double t_max() const;
  bool covers(double t) const;

  /// Cubic Hermite interpolation of w (using w_t) and monotone cubic
  /// (Fritsch-Carlson) interpolation of w_t. Throws DomainError outside the
  /// grid.
  LogSample at(double t) const;
  double w(double t) const { return at(t).w; }

  /// Copy restricted to samples with t in [lo, hi].
  LogProfile slice(double lo, double hi) const;

  std::vector<double> t_values() const;
  std::vector<double> w_values() const;
  std::vector<double> w_t_values() const;

 private:
  std::size_t locate(double t) const;
  double pchip_slope(std::size_t i) const;

  std::vector<LogSample> samples_;
};

/// Ball profile -> log variables. Throws DomainError for r <= 0 or
/// non-monotone radii. Output is ordered by increasing t.
LogProfile radial_to_log(const RadialProfile& p);

/// Log variables -> ball profile for the given lambda (r = e^{-t}/sqrt(lambda),
/// u_r = -w_t / r). Output is ordered by decreasing r.
RadialProfile log_to_radial(const LogProfile& p, double lambda);

/// |grad u*|(x/sqrt(lambda))/sqrt(lambda) = |w_t(-ln r)| / r, where r = |x| is
/// the rescaled radius. Throws DomainError when -ln r is outside the grid.
double gradient_magnitude(const LogProfile& p, double lambda, double r);

/// CSV with header `t,w,w_t`.
void write_csv(std::ostream& os, const LogProfile& p);
/// CSV with header `r,u,u_r`.
void write_csv(std::ostream& os, const RadialProfile& p);

LogProfile read_log_profile_csv(std::istream& is);
/// lambda is not part of the file; it is supplied by the caller.
RadialProfile read_radial_profile_csv(std::istream& is, double lambda);

}  // namespace gelfand::transform
