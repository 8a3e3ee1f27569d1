// Serial reference path vs OpenMP path for the Monte Carlo and quadrature kernels.
// Run with RMEDGE_WORKERS / OMP_NUM_THREADS to pick the thread count.
#include <benchmark/benchmark.h>

#include <cstdlib>
#include <string>

#include "rmedge/edge_stats.hpp"
#include "rmedge/flow.hpp"
#include "rmedge/ginibre_kernel.hpp"
#include "rmedge/girko.hpp"
#include "rmedge/parallel.hpp"
#include "rmedge/tail_kernel.hpp"

using namespace rmedge;

namespace {

Exec exec_arg(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel x" + std::to_string(worker_count()) : "serial"); }

void BM_EdgeEnsemble(benchmark::State& s) {
    EdgeOptions o;
    o.exec = exec_arg(s);
    for (auto _ : s) benchmark::DoNotOptimize(mc_edge_ensemble(Dist::ginibre, 256, 32, 1, o));
    label(s);
}

void BM_EdgeEnsembleDense(benchmark::State& s) {
    EdgeOptions o;
    o.exec = exec_arg(s);
    for (auto _ : s) benchmark::DoNotOptimize(mc_edge_ensemble(Dist::bernoulli_phase, 128, 16, 1, o));
    label(s);
}

void BM_GirkoRhs(benchmark::State& s) {
    const auto X = sample_matrix(Dist::ginibre, 16, 1, 0);
    const auto f = build_cutoff(CutoffKind::lower, 16, 0, 0, CutoffOverride{1.05, 0.1, 0.3});
    for (auto _ : s) benchmark::DoNotOptimize(girko_rhs(X, f, 1e-2, 1e6, {0}, exec_arg(s)));
    label(s);
}

void BM_Flow(benchmark::State& s) {
    FlowOptions o;
    o.n = 64;
    o.pairs = 32;
    o.exec = exec_arg(s);
    for (auto _ : s) benchmark::DoNotOptimize(flow_experiment(o));
    label(s);
}

void BM_TailKernelIntegral(benchmark::State& s) {
    const TailParams p{20, 0.3};
    for (auto _ : s) benchmark::DoNotOptimize(kernel_Y_integral(p, 0.0, 0.05, 2, exec_arg(s)));
    label(s);
}

void BM_VarianceCount(benchmark::State& s) {
    VarianceOptions o;
    o.mc_nodes = 100000;
    o.exec = exec_arg(s);
    for (auto _ : s) benchmark::DoNotOptimize(variance_count(50, Box{0.9, 1.2, -0.3, 0.3}, o));
    label(s);
}

}  // namespace

BENCHMARK(BM_EdgeEnsemble)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EdgeEnsembleDense)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GirkoRhs)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Flow)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TailKernelIntegral)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VarianceCount)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
    if (const char* w = std::getenv("RMEDGE_WORKERS")) set_worker_count(std::atoi(w));
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
