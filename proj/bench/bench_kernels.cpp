#include <benchmark/benchmark.h>

#include <cmath>

#include "rhls/kernels.hpp"
#include "rhls/montecarlo.hpp"
#include "rhls/operators.hpp"

using namespace rhls;

namespace {

const HalfSpaceGrid& grid() {
    static const HalfSpaceGrid g = half_space_grid(2, {-6, 6, 24, 4, 8});
    return g;
}

RadialFunction profile() {
    RadialFunction f;
    f.value = [](double r) { return std::pow(1 + r * r, -2); };
    return f;
}

void grid_extension(benchmark::State& st, bool parallel) {
    const RadialFunction f = profile();
    const NodeFunction F = [&](double s, double h) { return extend(f, 2, s, h); };
    for (auto _ : st) {
        auto v = parallel ? evaluate_grid_parallel(grid(), F) : evaluate_grid_serial(grid(), F);
        benchmark::DoNotOptimize(v.data());
    }
    st.SetItemsProcessed(st.iterations() * grid().nodes.size());
}

void mc_pair(benchmark::State& st, bool parallel) {
    const MultiSampler s = [](Rng& g, std::span<double> out) {
        const Vec d = random_direction(g, 3);
        const double u = uniform01(g);
        out[0] = std::pow(d[0] - u, 2) + d[1] * d[1];
        out[1] = std::abs(d[2]) * u;
    };
    const long samples = 1 << 16;
    for (auto _ : st) {
        McMoments m = parallel ? mc_moments_parallel(s, 2, samples, 3) : mc_moments_serial(s, 2, samples, 3);
        benchmark::DoNotOptimize(m.mean.data());
    }
    st.SetItemsProcessed(st.iterations() * samples);
}

}  // namespace

BENCHMARK_CAPTURE(grid_extension, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(grid_extension, openmp, true)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(mc_pair, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(mc_pair, openmp, true)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
