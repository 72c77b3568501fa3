// Serial reference vs OpenMP for the data-parallel kernels. Arg 0 is
// Execution::serial, 1 is Execution::parallel.

#include "lps/banach.hpp"
#include "lps/kernels.hpp"
#include "lps/lpfun.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace lps;

namespace {

Execution exec_of(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

void BM_certify_bound(benchmark::State& state) {
    const auto g = BoundGrid::line(-3.0, 3.0, 25, BoundGrid::log_times(0.01, 2.0, 20));
    for (auto _ : state) benchmark::DoNotOptimize(certify_bound(SemigroupId::hermite(1), 1, 0.125, g, exec_of(state)));
}

void BM_g_function(benchmark::State& state) {
    Grid grid({Axis::symmetric(12.0, 0.05)});
    auto f = SampledField::from_function(grid, [](std::span<const double> x) { return std::exp(-x[0] * x[0]); });
    GFunctionSpec s;
    for (auto _ : state) benchmark::DoNotOptimize(g_function_field(SemigroupId::hermite(1), f, s, exec_of(state)));
}

void BM_maximal(benchmark::State& state) {
    Grid grid({Axis::symmetric(8.0, 0.02)});
    auto f = SampledField::from_function(grid, [](std::span<const double> x) { return std::exp(-x[0] * x[0]) * std::cos(3.0 * x[0]); });
    for (auto _ : state) benchmark::DoNotOptimize(maximal_fn(f, NormedSpace::real_line(), exec_of(state)));
}

void BM_modulus_restarts(benchmark::State& state) {
    const auto sp = NormedSpace::lp(3.0, 2);
    ModulusOptions o;
    o.exec = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(modulus_convexity(sp, 0.8, o));
}

void BM_critical_radius_ratio(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(critical_radius_ratio(-20.0, 20.0, 2.0, 0.01, 64, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_certify_bound)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_g_function)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_maximal)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_modulus_restarts)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_critical_radius_ratio)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
