#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gelfand/error.hpp"
#include "gelfand/fixedpoint.hpp"
#include "gelfand/numeric.hpp"

using namespace gelfand;
using namespace gelfand::fixedpoint;
using HP = boost::multiprecision::cpp_bin_float_50;

namespace {

double central(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}
double central2(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

// F(t, eta) = exp(G_1(f + eta) - 2t) + f'' - (n-2) f' - 2(n-2) eta for
// f = ln(2t + phi), phi = ln((n-2)/t) + ln(1 + ln t/(2t)), in 50 digits.
HP forcing_m1_hp(int n, HP t, HP eta) {
  const HP L = log(t);
  const HP q = 1 + L / (2 * t);
  const HP q1 = (1 - L) / (2 * t * t);
  const HP q2 = (2 * L - 3) / (2 * t * t * t);
  const HP phi = log(HP(n - 2) / t) + log(q);
  const HP phi1 = -1 / t + q1 / q;
  const HP phi2 = 1 / (t * t) + q2 / q - (q1 / q) * (q1 / q);
  const HP psi = 2 * t + phi;
  const HP f1 = (2 + phi1) / psi;
  const HP f2 = phi2 / psi - f1 * f1;
  // G_1(ln psi + eta) = psi e^eta
  return exp(psi * exp(eta) - 2 * t) + f2 - (n - 2) * f1 - 2 * (n - 2) * eta;
}

// Same for m = 2: f = H_2(2t + phi), phi = ln(2(n-2)) - ln(2t) - ln ln(2t).
HP forcing_m2_hp(int n, HP t, HP eta) {
  const HP y = 2 * t;
  const HP ly = log(y);
  const HP phi = log(HP(2 * (n - 2))) - ly - log(ly);
  const HP phi1 = -1 / t - 1 / (t * ly);
  const HP phi2 = 1 / (t * t) + (ly + 1) / (t * ly * t * ly);
  const HP psi = y + phi;
  const HP lp = log(psi);
  const HP h1 = 1 / (psi * lp);
  const HP h2 = -(lp + 1) / (psi * lp * psi * lp);
  const HP s = 2 + phi1;
  const HP f1 = h1 * s;
  const HP f2 = h2 * s * s + h1 * phi2;
  // G_2(H_2(psi) + eta) = psi^{e^eta}
  return exp(pow(psi, exp(eta)) - 2 * t) + f2 - (n - 2) * f1 - 2 * (n - 2) * eta;
}

}  // namespace

TEST_SUITE("fixedpoint") {

TEST_CASE("phi derivatives against finite differences") {
  for (int n : {3, 6, 9}) {
    for (double t : {5.0, 30.0, 200.0}) {
      const auto p1 = phi_m1(n, t);
      auto f1 = [n](double x) { return phi_m1(n, x).phi; };
      CHECK(p1.phi_t == doctest::Approx(central(f1, t, 1e-3 * t)).epsilon(1e-8));
      CHECK(p1.phi_tt == doctest::Approx(central2(f1, t, 1e-2 * t)).epsilon(1e-5));
      for (int m : {2, 3}) {
        const auto pm = phi_m(n, m, t);
        auto fm = [n, m](double x) { return phi_m(n, m, x).phi; };
        CHECK(pm.phi_t == doctest::Approx(central(fm, t, 1e-3 * t)).epsilon(1e-8));
        CHECK(pm.phi_tt == doctest::Approx(central2(fm, t, 1e-2 * t)).epsilon(1e-5));
      }
    }
  }
  // e^phi = 2(n-2) H'_m(2t)
  const double t = 40;
  CHECK(std::exp(phi_m(5, 2, t).phi) == doctest::Approx(6.0 / (80 * std::log(80.0))).epsilon(1e-14));
}

TEST_CASE("m = 1 forcing decomposition against a 50-digit evaluation") {
  for (auto [n, t, eta] : {std::tuple{3, 50.0, 1e-3}, std::tuple{7, 20.0, -2e-2},
                           std::tuple{3, 400.0, 1e-6}}) {
    const double ref = static_cast<double>(forcing_m1_hp(n, HP(t), HP(eta)));
    CHECK(forcing_m1(n, t, eta) == doctest::Approx(ref).epsilon(1e-11));
  }
  // F(t, 0) = F0
  CHECK(forcing_m1(3, 50, 0.0) == forcing_parts_m1(3, 50, 0.0).F0);
}

TEST_CASE("m = 2 tower remainder and forcing against a 50-digit evaluation") {
  const int n = 3;
  const double t = 100.0;
  const double eta = 1e-4;
  const double psi = 2 * t + phi_m(n, 2, t).phi;
  const HP P(psi);
  const HP rho = pow(P, exp(HP(eta))) - P - P * log(P) * HP(eta);
  CHECK(tower_remainder(2, psi, eta) == doctest::Approx(static_cast<double>(rho)).epsilon(1e-12));
  CHECK(forcing_m(n, 2, t, eta) ==
        doctest::Approx(static_cast<double>(forcing_m2_hp(n, HP(t), HP(eta)))).epsilon(1e-10));
  CHECK(tower_remainder(1, psi, 0.0) == 0.0);
}

TEST_CASE("Ansatz dispatch") {
  const Ansatz oracle(ProblemSpec{5, 1, Nonlinearity::gelfand});
  const auto b = oracle.base(3.0);
  CHECK(b.f == doctest::Approx(6.0 + std::log(6.0)));
  CHECK(b.f_t == 2.0);
  CHECK(oracle.forcing(3.0, 0.0) == 0.0);
  // exp(w - 2t) - 2(n-2) - 2(n-2) eta for w = f + eta
  CHECK(oracle.forcing(3.0, 0.01) == doctest::Approx(6 * (std::expm1(0.01) - 0.01)).epsilon(1e-14));

  const Ansatz m1(ProblemSpec{3, 1});
  CHECK(m1.base(50).f == doctest::Approx(std::log(100 + phi_m1(3, 50).phi)).epsilon(1e-15));
  CHECK(m1.forcing(50, 1e-3) == forcing_m1(3, 50, 1e-3));
}

TEST_CASE("Green kernel: initial data, equation and integral") {
  boost::math::quadrature::exp_sinh<double> q;
  for (int n = 3; n <= 12; ++n) {
    const PsiKernel k(n);
    CHECK(k(0.0) == doctest::Approx(0.0).scale(1));
    const double k1 = k(1e-7) / 1e-7;
    CHECK(k1 == doctest::Approx(1.0).epsilon(1e-5));
    for (double tau : {0.3, 1.7, 4.0}) {
      const double res = central2([&](double x) { return k(x); }, tau, 1e-3) +
                         (n - 2) * central([&](double x) { return k(x); }, tau, 1e-3) +
                         2.0 * (n - 2) * k(tau);
      CHECK(std::abs(res) < 1e-8);
    }
    const double integral = q.integrate([&](double x) { return k(x); });
    CHECK(integral == doctest::Approx(k.integral()).epsilon(1e-10));
    CHECK(k.abs_integral() >= k.integral() * (1 - 1e-12));
    CHECK(k.abs_tail_bound(20.0) <= k.abs_integral());
    CHECK(k.mu().has_value() == (n < 10));
    CHECK(k.root_pair().has_value() == (n >= 10));
  }
  CHECK(PsiKernel(3).mu().value() == doctest::Approx(std::sqrt(7.0)));
}

TEST_CASE("psi_apply and ExpConvolution on F = e^{-s}") {
  // -int_t^inf k(s-t) e^{-s} ds = -e^{-t} / (3n - 5)
  for (int n : {3, 6, 9, 10, 12}) {
    const PsiKernel k(n);
    const auto v = psi_apply(k, [](double s) { return std::exp(-s); }, 2.0, 80.0);
    CHECK(v.value == doctest::Approx(-std::exp(-2.0) / (3 * n - 5)).epsilon(1e-12));

    const PanelGrid grid(1.0, 60.0, k.max_panel_length());
    const ExpConvolution conv(grid, k.terms());
    std::vector<double> f;
    for (double s : grid.nodes()) f.push_back(std::exp(-s));
    const auto J = conv.apply(f);
    double worst = 0;
    for (std::size_t i = 0; i < grid.nodes().size(); ++i) {
      const double t = grid.nodes()[i];
      if (t > 40) break;
      worst = std::max(worst, std::abs(J[i] - std::exp(-t) / (3 * n - 5)) * std::exp(t));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("psi_apply tail bound guards truncation") {
  const PsiKernel k(3);
  auto F = [](double s) { return 1.0 / (s * s); };
  const auto v = psi_apply(k, F, 10.0, 200.0);
  CHECK(v.tail_bound > 0);
  CHECK(v.tail_bound < 1e-4);
  CHECK_THROWS_AS(psi_apply(k, F, 10.0, 12.0, 1e-12), ConvergenceError);
}

TEST_CASE("PanelGrid interpolates degree-8 polynomials exactly") {
  const PanelGrid g(3.0, 10.0, 0.9);
  CHECK(g.panels() == 8);
  CHECK(g.nodes().size() == static_cast<std::size_t>(8 * 8 + 1));
  std::vector<double> v;
  auto p = [](double t) { return std::pow(t - 5.0, 8) * 1e-3 - t; };
  for (double t : g.nodes()) v.push_back(p(t));
  // piecewise: exact on each panel
  for (double t : {3.01, 4.4, 7.77, 9.99}) CHECK(g.interpolate(v, t) == doctest::Approx(p(t)).epsilon(1e-12));
}

TEST_CASE("Picard iteration for n = 3, m = 1") {
  const auto sol = picard_solve(ProblemSpec{3, 1}, EtaSpaceConfig{});
  CHECK(sol.final_defect <= 1e-12);
  CHECK(sol.max_ratio() < 1.0);
  CHECK(sol.sup_weighted_eta <= sol.config.M);
  CHECK(sol.config.t_max == 200.0);
  CHECK(sol.escalations == 0);

  // fixed point: Psi[eta] = eta, checked with independent adaptive panels
  const PsiKernel k(3);
  const Ansatz a(ProblemSpec{3, 1});
  auto F = [&](double s) { return a.forcing(s, sol.eta_at(s)); };
  for (double t : {35.0, 60.0, 120.0}) {
    const auto v = psi_apply(k, F, t, sol.panels.end());
    CHECK(std::abs(v.value - sol.eta_at(t)) * t * t < 1e-8);
  }

  // eta_t is the derivative of eta
  std::vector<double> tt, ee;
  for (std::size_t j = 0; j < sol.exposed_size(); ++j) {
    tt.push_back(sol.grid[j]);
    ee.push_back(sol.eta[j]);
  }
  const auto d = numeric::fd_derivative(tt, ee);
  for (std::size_t j = 10; j + 10 < tt.size(); j += 37) {
    CHECK(std::abs(d[j] - sol.eta_t[j]) * tt[j] * tt[j] < 1e-6);
  }
  // decays like t^-2
  CHECK(sol.eta_at(100.0) * 1e4 == doctest::Approx(sol.eta_at(200.0) * 4e4).epsilon(0.05));
}

TEST_CASE("Picard iteration in oracle mode is exact") {
  const auto sol = picard_solve(ProblemSpec{3, 1, Nonlinearity::gelfand}, EtaSpaceConfig{});
  for (double e : sol.eta) CHECK(e == 0.0);
  CHECK(sol.iterations <= 1);
}

TEST_CASE("Picard configuration errors") {
  EtaSpaceConfig bad;
  bad.T = 0.5;
  CHECK_THROWS_AS(bad.resolved(), DomainError);
  EtaSpaceConfig short_window;
  short_window.T = 50;
  short_window.t_max = 40;
  CHECK_THROWS_AS(short_window.resolved(), DomainError);
  EtaSpaceConfig capped;
  capped.tol = 1e-30;
  capped.max_iter = 2;
  capped.max_escalations = 1;
  CHECK_THROWS_AS(picard_solve(ProblemSpec{3, 1}, capped), ConvergenceError);
}

}  // TEST_SUITE
