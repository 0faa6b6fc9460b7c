#include <benchmark/benchmark.h>

#include "gelfand/bifurcation.hpp"
#include "gelfand/fixedpoint.hpp"
#include "gelfand/iterexp.hpp"
#include "gelfand/shooting.hpp"

namespace {

void BM_GTower(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  double y = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gelfand::iterexp::g_tower(m, y));
    y += 1e-9;
  }
}
BENCHMARK(BM_GTower)->Arg(1)->Arg(2)->Arg(3);

void BM_LogFTail(benchmark::State& state) {
  double t = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gelfand::iterexp::log_f_tail(t));
    t += 1e-9;
  }
}
BENCHMARK(BM_LogFTail);

void BM_PicardSolve(benchmark::State& state) {
  const gelfand::ProblemSpec p{static_cast<int>(state.range(0)), static_cast<int>(state.range(1))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(gelfand::fixedpoint::picard_solve(p, {}));
  }
}
BENCHMARK(BM_PicardSolve)->Args({3, 1})->Args({5, 2})->Unit(benchmark::kMillisecond);

void BM_ShootRegular(benchmark::State& state) {
  const gelfand::ProblemSpec p{3, 1};
  gelfand::bifurcation::ShootOptions opts;
  opts.keep_profile = false;
  const double rho = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gelfand::bifurcation::shoot_regular(p, rho, opts));
  }
}
BENCHMARK(BM_ShootRegular)->Arg(1)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_IntersectionCount(benchmark::State& state) {
  const gelfand::ProblemSpec p{3, 1};
  gelfand::fixedpoint::EtaSpaceConfig cfg;
  cfg.t_max = 260;
  const auto singular = gelfand::shooting::build_singular(p, cfg);
  const auto point = gelfand::bifurcation::shoot_regular(p, static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gelfand::bifurcation::intersection_count(p, point, singular));
  }
}
BENCHMARK(BM_IntersectionCount)->Arg(2)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
