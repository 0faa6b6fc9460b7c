#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gelfand::numeric {

/// e^x - 1 - x without cancellation near zero.
double expm1_minus_x(double x);

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with `points` nodes. Cached; safe to call concurrently.
const QuadratureRule& gauss_legendre(int points);

/// Integrate f over [a, b] with a fixed Gauss-Legendre rule.
template <class F>
double integrate_gl(F&& f, double a, double b, int points = 20) {
  const QuadratureRule& q = gauss_legendre(points);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    sum += q.weights[i] * f(mid + half * q.nodes[i]);
  }
  return half * sum;
}

/// Chebyshev-Lobatto points cos(pi j / order), j = 0..order, returned in
/// increasing order on [-1, 1].
std::vector<double> chebyshev_lobatto(int order);

/// Barycentric Lagrange interpolation on a fixed node set.
class Barycentric {
 public:
  explicit Barycentric(std::vector<double> nodes);

  const std::vector<double>& nodes() const { return nodes_; }

  double operator()(std::span<const double> values, double x) const;

  /// Lagrange basis values l_k(x), written into `out` (size = nodes().size()).
  void basis(double x, std::span<double> out) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Fornberg weights for the derivative of order `deriv` at x0 from the given
/// stencil nodes.
std::vector<double> fornberg_weights(double x0, std::span<const double> nodes,
                                     int deriv);

/// First derivative of sampled data on a non-uniform grid using a sliding
/// `stencil`-point Lagrange stencil (one-sided at the ends).
std::vector<double> fd_derivative(std::span<const double> x,
                                  std::span<const double> f, int stencil = 5);

/// Least-squares slope of y against x.
double linear_fit_slope(std::span<const double> x, std::span<const double> y);

/// Round-trip (shortest exact) decimal representation of a double.
std::string format_double(double v);

}  // namespace gelfand::numeric
