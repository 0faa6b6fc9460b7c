#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gelfand/error.hpp"
#include "gelfand/ode.hpp"

using namespace gelfand;
using namespace gelfand::ode;

TEST_SUITE("ode") {

TEST_CASE("harmonic oscillator forward and backward") {
  const Integrator integ([](double, const State& y) -> State { return {y[1], -y[0]}; });
  const auto fwd = integ.integrate(0.0, {0.0, 1.0}, 10.0);
  CHECK(fwd.y[0] == doctest::Approx(std::sin(10.0)).epsilon(1e-10));
  CHECK(fwd.y[1] == doctest::Approx(std::cos(10.0)).epsilon(1e-10));
  const auto back = integ.integrate(10.0, fwd.y, 0.0);
  CHECK(std::abs(back.y[0]) < 1e-10);
}

TEST_CASE("dense output accuracy") {
  const Integrator integ([](double t, const State& y) -> State { return {y[1], -y[0] + 0 * t}; },
                         Options{1e-10, 1e-12, 0.0, 0.5});
  double worst = 0.0;
  integ.integrate(0.0, {0.0, 1.0}, 6.0, [&](const Step& s) {
    for (double f : {0.25, 0.5, 0.75}) {
      const double t = s.t0 + f * (s.t1 - s.t0);
      worst = std::max(worst, std::abs(s.at(t)[0] - std::sin(t)));
    }
    return true;
  });
  CHECK(worst < 1e-9);
}

TEST_CASE("observer can stop the integration") {
  const Integrator integ([](double, const State& y) -> State { return {y[1], 0.0}; });
  int calls = 0;
  const auto r = integ.integrate(0.0, {0.0, 1.0}, 100.0, [&](const Step&) { return ++calls < 3; });
  CHECK(r.stopped_by_observer);
  CHECK(calls == 3);
}

TEST_CASE("integrate_to_zero finds the first zero of cos") {
  const Integrator integ([](double, const State& y) -> State { return {y[1], -y[0]}; });
  const auto zc = integrate_to_zero(integ, 0.0, {1.0, 0.0}, 10.0);
  REQUIRE(zc.found);
  CHECK(zc.t == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
  CHECK(zc.y[1] == doctest::Approx(-1.0).epsilon(1e-10));
  const auto none = integrate_to_zero(integ, 0.0, {1.0, 0.0}, 1.0);
  CHECK_FALSE(none.found);
}

TEST_CASE("overflowing stages shrink the step instead of failing") {
  // y' = y^2 blows up at t = 1; stages beyond it throw.
  const Integrator integ([](double, const State& y) -> State {
    if (y[0] > 1e6) throw OverflowError("blow-up");
    return {y[0] * y[0], 0.0};
  }, Options{1e-10, 1e-12, 0.5, 0.0, 10000});
  const auto r = integ.integrate(0.0, {1.0, 0.0}, 0.9);
  CHECK(r.y[0] == doctest::Approx(10.0).epsilon(1e-8));
  CHECK(r.rejected >= 0);
}

}  // TEST_SUITE
