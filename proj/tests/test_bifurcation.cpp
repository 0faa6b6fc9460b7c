#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gelfand/bifurcation.hpp"
#include "gelfand/error.hpp"
#include "oracles.hpp"

using namespace gelfand;
using namespace gelfand::bifurcation;

namespace {

const shooting::SingularSolution& singular_3_1() {
  static const auto s = [] {
    fixedpoint::EtaSpaceConfig c;
    c.t_max = 260;  // covers the centre layer of rho = 6
    return shooting::build_singular(ProblemSpec{3, 1}, c);
  }();
  return s;
}

}  // namespace

TEST_SUITE("bifurcation") {

TEST_CASE("regular shooting agrees with a radial-variable integration") {
  for (auto [p, rho] : {std::pair{ProblemSpec{3, 1}, 0.5}, std::pair{ProblemSpec{3, 1}, 2.0},
                        std::pair{ProblemSpec{5, 1}, 1.0}, std::pair{ProblemSpec{3, 2}, 0.5},
                        std::pair{ProblemSpec{3, 1, Nonlinearity::gelfand}, 4.0}}) {
    const auto bp = shoot_regular(p, rho);
    const double R = oracle::regular_radius(p.n, p.effective_height(), rho);
    CHECK(bp.lambda == doctest::Approx(R * R).epsilon(1e-9));
    CHECK(bp.R == doctest::Approx(std::sqrt(bp.lambda)).epsilon(1e-14));
    CHECK(bp.monotone);
  }
}

TEST_CASE("Gelfand n = 3: first fold and limit") {
  const ProblemSpec p{3, 1, Nonlinearity::gelfand};
  const auto grid = default_rho_grid(30.0, 0.01);
  const auto curve = trace_curve(p, grid, 2.0);
  REQUIRE(curve.turning_points.size() >= 2);
  // classical fold value for n = 3
  CHECK(curve.turning_points.front().lambda == doctest::Approx(3.3220).epsilon(1e-4));
  CHECK(std::abs(curve.points.back().lambda / 2.0 - 1) < 1e-2);
}

TEST_CASE("turning points of a synthetic damped curve") {
  std::vector<double> rho, lambda;
  const double ls = 0.7;
  for (int i = 0; i <= 2000; ++i) {
    rho.push_back(0.01 * i);
    lambda.push_back(ls + std::exp(-rho.back()) * std::sin(rho.back()));
  }
  const auto tps = turning_points(rho, lambda, ls);
  REQUIRE(tps.size() >= 5);
  for (std::size_t k = 0; k < tps.size(); ++k) {
    CHECK(tps[k].rho == doctest::Approx(std::numbers::pi / 4 + k * std::numbers::pi).epsilon(1e-4));
    REQUIRE(tps[k].offset.has_value());
    if (k > 0) {
      CHECK(*tps[k].offset * *tps[k - 1].offset < 0);
      CHECK(std::abs(*tps[k].offset) < std::abs(*tps[k - 1].offset));
    }
  }
  CHECK_FALSE(turning_points(rho, lambda).front().offset.has_value());
}

TEST_CASE("n = 3 branch oscillates about lambda*; n = 11 does not turn") {
  const auto& s = singular_3_1();
  const auto curve = trace_curve(ProblemSpec{3, 1}, default_rho_grid(6.0), s.lambda_star);
  REQUIRE(curve.turning_points.size() >= 2);
  for (std::size_t k = 1; k < curve.turning_points.size(); ++k) {
    const double a = *curve.turning_points[k - 1].offset;
    const double b = *curve.turning_points[k].offset;
    CHECK(a * b < 0);
    CHECK(std::abs(b) < std::abs(a));
  }
  const auto far = trace_curve(ProblemSpec{11, 1}, default_rho_grid(6.0));
  CHECK(far.turning_points.empty());
  const auto l = far.lambda();
  // increases to lambda*, saturating in double precision
  for (std::size_t i = 1; i < l.size(); ++i) CHECK(l[i] >= l[i - 1] * (1 - 1e-12));
  CHECK(l.back() == doctest::Approx(shooting::build_singular(ProblemSpec{11, 1}, {}).lambda_star).epsilon(1e-6));
}

TEST_CASE("intersection counts") {
  const ProblemSpec p{3, 1};
  const auto& s = singular_3_1();
  CHECK(intersection_count(p, shoot_regular(p, 0.5), s) == 0);
  CHECK(intersection_count(p, shoot_regular(p, 1.0), s) == 1);

  // both methods agree where the boundary shift is resolved
  const auto b3 = shoot_regular(p, 3.0);
  const auto d = intersections(p, b3, s, IntersectionMethod::direct);
  const auto v = intersections(p, b3, s, IntersectionMethod::variational);
  CHECK(d.count == v.count);
  CHECK(v.shift == doctest::Approx(d.shift).epsilon(1e-2));
  const auto b35 = shoot_regular(p, 3.5);
  CHECK(intersections(p, b35, s, IntersectionMethod::variational).shift ==
        doctest::Approx(b35.t_zero - s.t_star).epsilon(1e-2));

  int prev = -1;
  for (double rho : {2.0, 4.0, 6.0}) {
    const int c = intersection_count(p, shoot_regular(p, rho), s);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(prev > 50);
}

TEST_CASE("brute-force sign scan in ball coordinates") {
  // u_rho(x) = v_rho(R x) from the radial oracle, u*(x) = w*(t* - ln x).
  const ProblemSpec p{3, 1};
  const auto& s = singular_3_1();
  for (double rho : {1.0, 2.0, 2.6}) {
    const double R = oracle::regular_radius(3, 1, rho);
    std::vector<double> sgrid, r;
    for (double x = 8.0; x >= 0.01; x -= 1e-3) {
      sgrid.push_back(x);
      r.push_back(R * std::exp(-x));
    }
    const auto v = oracle::regular_values(3, 1, rho, r);
    int changes = 0;
    int last = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = v[i] - s.profile.w(s.t_star + sgrid[i]);
      const int sg = d > 0 ? 1 : -1;
      if (last != 0 && sg != last) ++changes;
      last = sg;
    }
    CHECK(intersection_count(p, shoot_regular(p, rho), s) == changes);
  }
}

TEST_CASE("grids and ranges") {
  const auto g = default_rho_grid(3.0, 0.01);
  CHECK(g.front() == doctest::Approx(1e-3));
  CHECK(g.back() == doctest::Approx(3.0));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK(max_safe_rho(ProblemSpec{3, 1}) == doctest::Approx(std::log(4000.0)));
  CHECK(max_safe_rho(ProblemSpec{3, 2}) == doctest::Approx(std::log(std::log(4000.0))));
  CHECK_THROWS_AS(shoot_regular(ProblemSpec{3, 2}, 3.0), OverflowError);
  CHECK_THROWS_AS(shoot_regular(ProblemSpec{3, 1}, -1.0), DomainError);
}

}  // TEST_SUITE
