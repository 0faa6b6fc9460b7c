#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "gelfand/numeric.hpp"

using namespace gelfand::numeric;

TEST_SUITE("numeric") {

TEST_CASE("expm1_minus_x matches the series and the direct form") {
  for (double x : {1e-12, -3e-9, 1e-5, -0.01, 0.3}) {
    double series = 0, term = x;
    for (int k = 2; k < 30; ++k) series += (term *= x / k);
    CHECK(expm1_minus_x(x) == doctest::Approx(series).epsilon(1e-12));
  }
  for (double x : {2.0, -5.0, 20.0}) {
    CHECK(expm1_minus_x(x) == doctest::Approx(std::expm1(x) - x).epsilon(1e-14));
  }
}

TEST_CASE("Gauss-Legendre is exact for degree 2n-1") {
  for (int n : {2, 5, 12, 24}) {
    const int deg = 2 * n - 1;
    const double exact = (1.0 - std::pow(-1.0, deg + 1)) / (deg + 1);  // int_{-1}^1 x^deg
    const double even = 2.0 / deg;                                     // x^{deg-1}
    CHECK(integrate_gl([&](double x) { return std::pow(x, deg); }, -1, 1, n) ==
          doctest::Approx(exact).scale(1));
    CHECK(integrate_gl([&](double x) { return std::pow(x, deg - 1); }, -1, 1, n) ==
          doctest::Approx(even).epsilon(1e-14));
  }
  CHECK(integrate_gl([](double x) { return std::exp(x); }, 0, 1, 20) ==
        doctest::Approx(std::numbers::e - 1).epsilon(1e-15));
}

TEST_CASE("Chebyshev-Lobatto nodes and barycentric interpolation") {
  const auto x = chebyshev_lobatto(8);
  REQUIRE(x.size() == 9);
  CHECK(x.front() == -1.0);
  CHECK(x.back() == 1.0);
  for (std::size_t i = 1; i < x.size(); ++i) CHECK(x[i] > x[i - 1]);

  Barycentric b(x);
  std::vector<double> v(x.size());
  auto poly = [](double t) { return 3 * std::pow(t, 8) - t * t * t + 0.5; };
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = poly(x[i]);
  for (double t : {-0.93, -0.2, 0.0, 0.41, 0.999}) {
    CHECK(b(v, t) == doctest::Approx(poly(t)).epsilon(1e-13));
  }
  CHECK(b(v, x[3]) == v[3]);

  std::vector<double> basis(x.size());
  b.basis(0.37, basis);
  double sum = 0;
  for (double l : basis) sum += l;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Fornberg weights reproduce derivatives of polynomials") {
  const std::vector<double> nodes{0.0, 0.3, 0.7, 1.2, 2.0};
  const auto w1 = fornberg_weights(0.5, nodes, 1);
  const auto w2 = fornberg_weights(0.5, nodes, 2);
  double d1 = 0, d2 = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double f = std::pow(nodes[i], 4) - 2 * nodes[i];
    d1 += w1[i] * f;
    d2 += w2[i] * f;
  }
  CHECK(d1 == doctest::Approx(4 * 0.125 - 2).epsilon(1e-12));
  CHECK(d2 == doctest::Approx(12 * 0.25).epsilon(1e-12));
}

TEST_CASE("fd_derivative on a non-uniform grid") {
  std::vector<double> x, f;
  for (int i = 0; i <= 200; ++i) {
    const double t = 1.0 + 0.01 * i + 0.003 * std::sin(i);
    x.push_back(t);
    f.push_back(std::sin(t));
  }
  const auto d = fd_derivative(x, f);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(d[i] == doctest::Approx(std::cos(x[i])).epsilon(1e-6));
}

TEST_CASE("linear_fit_slope") {
  std::vector<double> x{1, 2, 3, 4, 5}, y;
  for (double v : x) y.push_back(-2 * v + 7);
  CHECK(linear_fit_slope(x, y) == doctest::Approx(-2.0).epsilon(1e-14));
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0,
                   std::numeric_limits<double>::denorm_min(),
                   std::numeric_limits<double>::max()}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(30.0) == "30");
}

}  // TEST_SUITE
