#include <benchmark/benchmark.h>

#include <string>

#include "ccl/problems.hpp"

namespace {

// One grid of nx * nx points per iteration; reports points per second.
void BM_Grid(benchmark::State& state, const std::string& name) {
  const auto& spec = ccl::find_problem(name);
  const ccl::PointSolver solver(spec);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = ccl::linspace(spec.domain_x.lo, spec.domain_x.hi, n);
  const auto ts = ccl::linspace(spec.domain_t.lo, spec.domain_t.hi, n);
  for (auto _ : state) benchmark::DoNotOptimize(solver.grid(xs, ts, 1));
  state.counters["points_per_sec"] =
      benchmark::Counter(static_cast<double>(n * n), benchmark::Counter::kIsIterationInvariantRate);
}

void BM_SinglePoint(benchmark::State& state, const std::string& name, double x, double t) {
  const ccl::PointSolver solver(ccl::find_problem(name));
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(x, t));
}

}  // namespace

BENCHMARK_CAPTURE(BM_Grid, burgers_box, std::string("burgers_box"))->Arg(11)->Arg(31)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Grid, burgers_sine, std::string("burgers_sine"))->Arg(11)->Arg(31)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Grid, zhang_spacedependent, std::string("zhang_spacedependent"))
    ->Arg(11)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SinglePoint, burgers_sine, std::string("burgers_sine"), 2.0, 0.5)->Unit(benchmark::kMicrosecond);
BENCHMARK_CAPTURE(BM_SinglePoint, lqr_spacedependent, std::string("lqr_spacedependent"), -1.5, 1.0)
    ->Unit(benchmark::kMicrosecond);
