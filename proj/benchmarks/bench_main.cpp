#include <benchmark/benchmark.h>

#include <cmath>

#include "eqlayer/linsolve.hpp"
#include "eqlayer/manufactured.hpp"
#include "eqlayer/operators.hpp"
#include "eqlayer/spectral.hpp"
#include "eqlayer/transparent.hpp"

using namespace eqlayer;

namespace {

ProblemSpec mms(int n) {
    DomainCase d;
    d.y_max = 20.0;
    d.z_max = 6.0;
    return manufactured_spec(d, n, n, false);
}

}  // namespace

static void BM_Assemble(benchmark::State& state) {
    const ProblemSpec s = mms(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(assemble(s).matrix.nonZeros());
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_Assemble)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_SolveDirect(benchmark::State& state) {
    const ProblemSpec s = mms(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(solve(s).residual_norm);
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_SolveDirect)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_SolveIterative(benchmark::State& state) {
    const ProblemSpec s = mms(static_cast<int>(state.range(0)));
    SolverOptions o;
    o.method = SolverOptions::Method::Iterative;
    for (auto _ : state) benchmark::DoNotOptimize(solve(s, o).iterations);
}
BENCHMARK(BM_SolveIterative)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_BuildLambda(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    DomainCase d;
    d.tag = CaseTag::UpperStrip;
    d.H = 2.0;
    d.z_max = 12.0;
    d.y_max = 16.0;
    ProblemSpec s = make_spec(d, n, n);
    s.zero_order = true;
    for (auto _ : state) benchmark::DoNotOptimize(build_lambda(s).entries.sum());
}
BENCHMARK(BM_BuildLambda)->RangeMultiplier(2)->Range(32, 128)->Unit(benchmark::kMillisecond);

static void BM_ModeEvolveWithSource(benchmark::State& state) {
    auto src = [](double z) { return Complex(std::cos(z), 0.0); };
    double xi = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mode_evolve(xi, -1, 1.0, 2.0, src));
        xi = xi < 4.0 ? xi + 0.01 : 0.5;
    }
}
BENCHMARK(BM_ModeEvolveWithSource);

static void BM_LambdaSineMatrix(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(lambda_sine_matrix(n, 16.0).trace());
}
BENCHMARK(BM_LambdaSineMatrix)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
