// Serial reference vs OpenMP kernels. Run with --benchmark_filter to pick one.

#include "w9/periods.hpp"
#include "w9/theta.hpp"
#include "w9/w9.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace w9;

namespace {

const cplx I{0.0, 1.0};

ComplexMatrix bench_matrix(std::size_t g) {
    ComplexMatrix z(g, g);
    for (std::size_t i = 0; i < g; ++i)
        for (std::size_t j = 0; j < g; ++j) z(i, j) = i == j ? 0.1 + 0.9 * I : cplx(0.05, 0.2);
    return z;
}

void BM_LatticeSum(benchmark::State& state, bool parallel) {
    const std::size_t g = static_cast<std::size_t>(state.range(0));
    const int radius = static_cast<int>(state.range(1));
    const ComplexMatrix z = bench_matrix(g);
    const std::vector<int> shift(g, 1);
    const std::vector<cplx> w(g, 0.1 + 0.05 * I);
    for (auto _ : state) {
        const cplx v = parallel ? kernel::lattice_sum(z, shift, w, radius) : kernel::lattice_sum_serial(z, shift, w, radius);
        benchmark::DoNotOptimize(v);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(std::pow(2 * radius + 1, g)));
}

void BM_CoverArcs(benchmark::State& state, bool parallel) {
    const HyperellipticCurve curve = double_cover(curve_Qs(2.0 - std::sqrt(3.0)));
    const CyclePlan plan = build_cycles(curve, Layout::cover_genus3);
    QuadConfig quad;
    quad.tol = std::pow(10.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) {
        auto arcs = parallel ? arc_integrals(curve, plan, quad) : arc_integrals_serial(curve, plan, quad);
        benchmark::DoNotOptimize(arcs);
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_LatticeSum, serial, false)->Args({2, 20})->Args({3, 8})->Args({3, 14})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_LatticeSum, openmp, true)->Args({2, 20})->Args({3, 8})->Args({3, 14})->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CoverArcs, serial, false)->Arg(8)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_CoverArcs, openmp, true)->Arg(8)->Arg(11)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
