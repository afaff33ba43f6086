#include <benchmark/benchmark.h>

#include <string>
#include <variant>

#include "ccl/fvref.hpp"
#include "ccl/problems.hpp"

namespace {

// Full run from t = 0 to the end of the problem's time window.
void BM_FvRun(benchmark::State& state, const std::string& name) {
  const auto& spec = ccl::find_problem(name);
  const auto& flux = std::get<ccl::ConvexFlux>(spec.flux);
  const auto ncells = static_cast<std::size_t>(state.range(0));
  const auto start = ccl::init_from(spec.init.g, spec.domain_x.lo, spec.domain_x.hi, ncells);
  for (auto _ : state) benchmark::DoNotOptimize(ccl::run_until(start, flux, spec.domain_t.hi));
}

}  // namespace

BENCHMARK_CAPTURE(BM_FvRun, burgers_nwave, std::string("burgers_nwave"))
    ->Arg(250)
    ->Arg(1000)
    ->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FvRun, lwr_traffic, std::string("lwr_traffic"))->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);
