#include "gelfand/numeric.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gelfand::numeric {

double expm1_minus_x(double x) {
  if (std::abs(x) < 0.25) {
    // x^2/2! + x^3/3! + ...
    double term = 0.5 * x * x;
    double sum = term;
    for (int k = 3; k < 40; ++k) {
      term *= x / k;
      sum += term;
      if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::expm1(x) - x;
}

namespace {

QuadratureRule build_gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int points) {
  if (points < 1 || points > 256) {
    throw std::invalid_argument("gauss_legendre: points must be in [1, 256]");
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[points];
  if (!slot) slot = std::make_unique<QuadratureRule>(build_gauss_legendre(points));
  return *slot;
}

std::vector<double> chebyshev_lobatto(int order) {
  if (order < 1) throw std::invalid_argument("chebyshev_lobatto: order >= 1");
  std::vector<double> x(order + 1);
  for (int j = 0; j <= order; ++j) {
    x[j] = -std::cos(std::numbers::pi * j / order);
  }
  x.front() = -1.0;
  x.back() = 1.0;
  if (order % 2 == 0) x[order / 2] = 0.0;
  return x;
}

Barycentric::Barycentric(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  const std::size_t n = nodes_.size();
  weights_.assign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) weights_[j] /= (nodes_[j] - nodes_[k]);
    }
  }
}

double Barycentric::operator()(std::span<const double> values, double x) const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double d = x - nodes_[j];
    if (d == 0.0) return values[j];
    const double c = weights_[j] / d;
    num += c * values[j];
    den += c;
  }
  return num / den;
}

void Barycentric::basis(double x, std::span<double> out) const {
  double den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double d = x - nodes_[j];
    if (d == 0.0) {
      for (std::size_t k = 0; k < nodes_.size(); ++k) out[k] = (k == j) ? 1.0 : 0.0;
      return;
    }
    out[j] = weights_[j] / d;
    den += out[j];
  }
  for (std::size_t j = 0; j < nodes_.size(); ++j) out[j] /= den;
}

std::vector<double> fornberg_weights(double x0, std::span<const double> nodes,
                                     int deriv) {
  const int n = static_cast<int>(nodes.size()) - 1;
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(deriv + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, deriv);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        }
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      }
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int i = 0; i <= n; ++i) w[i] = c[i][deriv];
  return w;
}

std::vector<double> fd_derivative(std::span<const double> x,
                                  std::span<const double> f, int stencil) {
  const std::size_t n = x.size();
  if (f.size() != n) throw std::invalid_argument("fd_derivative: size mismatch");
  if (n < static_cast<std::size_t>(stencil)) {
    throw std::invalid_argument("fd_derivative: fewer samples than stencil");
  }
  std::vector<double> d(n);
  const std::size_t half = static_cast<std::size_t>(stencil) / 2;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lo = (i >= half) ? i - half : 0;
    if (lo + stencil > n) lo = n - stencil;
    const auto w = fornberg_weights(x[i], x.subspan(lo, stencil), 1);
    double s = 0.0;
    for (int k = 0; k < stencil; ++k) s += w[k] * f[lo + k];
    d[i] = s;
  }
  return d;
}

double linear_fit_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return std::nan("");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf.data(), ptr);
}

}  // namespace gelfand::numeric
