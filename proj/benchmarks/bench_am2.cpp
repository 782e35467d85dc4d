#include <benchmark/benchmark.h>

#include "am2/check.hpp"
#include "am2/diagram.hpp"
#include "am2/simulate.hpp"
#include "am2/stability.hpp"

using namespace am2;

namespace {

ModelParams reference_params() {
    return ModelParams(2.0, 1.0, 1.0, 0.5, 0.4, 0.5, 3.0, 2.0,
                       GrowthLaw::monod(1.0, 1.0), GrowthLaw::haldane(1.0, 1.0, 4.0));
}

void BM_rhs(benchmark::State& state) {
    const auto p = reference_params();
    const SystemState x(1.0, 0.5, 1.5, 0.4, 0.9, 0.6, 1.2, 0.8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rhs(p, x));
    }
}
BENCHMARK(BM_rhs);

void BM_jacobian(benchmark::State& state) {
    const auto p = reference_params();
    const SystemState x(1.0, 0.5, 1.5, 0.4, 0.9, 0.6, 1.2, 0.8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(jacobian(p, x));
    }
}
BENCHMARK(BM_jacobian);

void BM_enumerate_all(benchmark::State& state) {
    const auto p = reference_params();
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_all(p));
    }
}
BENCHMARK(BM_enumerate_all);

void BM_classify_all(benchmark::State& state) {
    const auto p = reference_params();
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify_all(p));
    }
}
BENCHMARK(BM_classify_all);

void BM_integrate_horizon(benchmark::State& state) {
    const auto p = reference_params();
    const SystemState x0(1.0, 0.5, 1.5, 0.4, 0.9, 0.6, 1.2, 0.8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate(p, x0, default_horizon(p), 1e-8, 1e-10));
    }
}
BENCHMARK(BM_integrate_horizon);

// Wall time per cell should stay flat as the lattice grows (the scan is
// linear in cell count); compare counters across grid sizes.
void BM_scan(benchmark::State& state) {
    const auto p = reference_params();
    const int n = static_cast<int>(state.range(0));
    const AxisSpec a1{OperatingAxis::S1in, 10.0 / 64.0, 10.0, n};
    const AxisSpec a2{OperatingAxis::S2in, 10.0 / 64.0, 10.0, n};
    for (auto _ : state) {
        benchmark::DoNotOptimize(scan(p, a1, a2, 1));
    }
    state.counters["cells"] = static_cast<double>(n) * n;
}
BENCHMARK(BM_scan)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_scan_threads(benchmark::State& state) {
    const auto p = reference_params();
    const AxisSpec a1{OperatingAxis::S1in, 10.0 / 64.0, 10.0, 64};
    const AxisSpec a2{OperatingAxis::S2in, 10.0 / 64.0, 10.0, 64};
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(scan(p, a1, a2, threads));
    }
}
BENCHMARK(BM_scan_threads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
