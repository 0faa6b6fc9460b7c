#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "gelfand/error.hpp"
#include "gelfand/iterexp.hpp"

using namespace gelfand;
using namespace gelfand::iterexp;

namespace {

// int_t^inf exp(-e^s) ds by double-exponential quadrature.
double f_tail_quadrature(double t) {
  boost::math::quadrature::exp_sinh<double> q;
  return q.integrate([t](double s) { return std::exp(-std::exp(t + s)); });
}

double central(const std::function<double(double)>& f, double x) {
  const double h = 1e-4 * std::max(1.0, std::abs(x));
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

TEST_SUITE("iterexp") {

TEST_CASE("tower basics") {
  CHECK(*g_tower(0, -3.5) == -3.5);
  CHECK(*g_tower(1, 2.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-16));
  CHECK(*g_tower(2, 0.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-16));
  CHECK(h_tower(2, std::exp(std::exp(1.5))) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(tower_lower(1) == 0.0);
  CHECK(tower_lower(2) == 1.0);
  CHECK(tower_lower(3) == doctest::Approx(std::exp(1.0)));
  CHECK(std::isinf(tower_lower(0)));
}

TEST_CASE("overflow is reported, not returned as inf") {
  const auto g = g_tower(3, 2.0);
  CHECK_FALSE(g.ok());
  CHECK_THROWS_AS(g.value(), OverflowError);
  CHECK(g_tower(1, 709.0).ok());
  CHECK_FALSE(g_tower(1, 710.0).ok());
  CHECK_FALSE(g_derivatives(2, 7.0).d1.ok());
}

TEST_CASE("H_m domain errors carry the failing level") {
  CHECK_THROWS_AS(h_tower(1, 0.0), DomainError);
  try {
    h_tower(3, 1.5);  // H_1 = 0.405, H_2 < 0
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.level() == 2);
  }
  CHECK_THROWS_AS(h_derivatives(2, 0.5), DomainError);
  CHECK_THROWS_AS(g_tower(-1, 0.0), DomainError);
}

TEST_CASE("round trip H_m(G_m(y)) = y on random samples") {
  std::mt19937_64 rng(7);
  const std::pair<double, double> range[] = {{-30.0, 30.0}, {-6.0, 6.0}, {-4.0, 1.85}};
  for (int m = 1; m <= 3; ++m) {
    std::uniform_real_distribution<double> d(range[m - 1].first, range[m - 1].second);
    for (int i = 0; i < 500; ++i) {
      const double y = d(rng);
      CHECK(std::abs(h_tower(m, *g_tower(m, y)) - y) <= 1e-12);
    }
  }
}

TEST_CASE("H_m derivatives against finite differences and closed forms") {
  std::mt19937_64 rng(11);
  for (int m = 1; m <= 3; ++m) {
    std::uniform_real_distribution<double> d(m == 1 ? 0.5 : 20.0, 500.0);
    for (int i = 0; i < 40; ++i) {
      const double t = d(rng);
      const auto h = h_derivatives(m, t);
      CHECK(h.d1 == doctest::Approx(central([m](double x) { return h_tower(m, x); }, t)).epsilon(1e-6));
      CHECK(h.d2 == doctest::Approx(central([m](double x) { return h_deriv(m, 1, x); }, t)).epsilon(1e-6));
      CHECK(h.d3 == doctest::Approx(central([m](double x) { return h_deriv(m, 2, x); }, t)).epsilon(1e-6));
    }
  }
  // H'_2(y) = 1/(y ln y), H''_2(y) = -(ln y + 1)/(y ln y)^2
  const double y = 37.0;
  const double ly = std::log(y);
  CHECK(h_deriv(2, 1, y) == doctest::Approx(1 / (y * ly)).epsilon(1e-15));
  CHECK(h_deriv(2, 2, y) == doctest::Approx(-(ly + 1) / (y * y * ly * ly)).epsilon(1e-14));
  CHECK_THROWS_AS(h_deriv(1, 4, 2.0), DomainError);
}

TEST_CASE("G_m derivatives against finite differences and the chain rule") {
  std::mt19937_64 rng(13);
  for (int m = 1; m <= 3; ++m) {
    std::uniform_real_distribution<double> d(-3.0, m == 1 ? 6.0 : 1.5);
    for (int i = 0; i < 40; ++i) {
      const double y = d(rng);
      const auto g = g_derivatives(m, y);
      CHECK(*g.d1 == doctest::Approx(central([m](double x) { return *g_tower(m, x); }, y)).epsilon(1e-6));
      CHECK(*g.d2 == doctest::Approx(central([m](double x) { return *g_deriv(m, 1, x); }, y)).epsilon(1e-6));
      CHECK(*g.d3 == doctest::Approx(central([m](double x) { return *g_deriv(m, 2, x); }, y)).epsilon(1e-6));
      // G'_m = prod_{j=1}^m G_j
      double prod = 1;
      for (int j = 1; j <= m; ++j) prod *= *g_tower(j, y);
      CHECK(*g.d1 == doctest::Approx(prod).epsilon(1e-14));
      // G'_m(y) H'_m(G_m(y)) = 1
      CHECK(*g.d1 * h_deriv(m, 1, *g.value) == doctest::Approx(1.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("f_tail against quadrature in every regime") {
  CHECK(f_tail(0.0) == doctest::Approx(f_tail_quadrature(0.0)).epsilon(1e-14));
  CHECK(std::abs(f_tail(0.0) - 0.2193839) < 1e-7);
  for (double t : {-12.0, -3.0, -0.5, 0.25, 1.0, 2.5, 3.9, 4.0, 5.0}) {
    CHECK(f_tail(t) == doctest::Approx(f_tail_quadrature(t)).epsilon(1e-12));
  }
}

TEST_CASE("log_f_tail is continuous across regime switches") {
  const double switches[] = {0.0, std::log(50.0)};
  for (double s : switches) {
    const double a = log_f_tail(s - 1e-9);
    const double b = log_f_tail(s + 1e-9);
    const double slope = -std::exp(-std::exp(s) - log_f_tail(s));
    CHECK(b - a == doctest::Approx(2e-9 * slope).epsilon(1e-5));
  }
}

TEST_CASE("f_tail asymptotics: F(t) exp(t + e^t) -> 1 from below") {
  const double v5 = std::exp(log_f_tail(5.0) + 5.0 + std::exp(5.0));
  CHECK(v5 >= 0.99);
  CHECK(v5 <= 1.0);
  double prev = 0.0;
  for (double t : {2.0, 4.0, 6.0, 10.0, 50.0}) {
    const double v = std::exp(log_f_tail(t) + t + std::exp(t));
    CHECK(v > prev * (1 - 1e-15));
    CHECK(v <= 1.0);
    prev = v;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-15));
  // F(t) ~ -t - gamma as t -> -inf
  CHECK(f_tail(-40.0) == doctest::Approx(40.0 - 0.5772156649015329).epsilon(1e-15));
  CHECK(std::isinf(log_f_tail(800.0)));
}

TEST_CASE("f_tail_inverse inverts f_tail, including the log-domain form") {
  for (double t : {-20.0, -1.0, 0.0, 0.7, 3.0, 6.0, 100.0}) {
    const double lx = log_f_tail(t);
    CHECK(f_tail_inverse_log(lx) == doctest::Approx(t).epsilon(1e-13).scale(1));
  }
  CHECK(f_tail_inverse(f_tail(1.3)) == doctest::Approx(1.3).epsilon(1e-13));
  CHECK_THROWS_AS(f_tail_inverse(0.0), DomainError);
  CHECK_THROWS_AS(f_tail_inverse(-1.0), DomainError);
}

}  // TEST_SUITE
