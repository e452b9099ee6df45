// Serial reference vs OpenMP path for the hot kernels. Both run the same
// block schedule, so the numbers they produce are identical; only time differs.

#include <benchmark/benchmark.h>

#include "horolab/expsum.hpp"
#include "horolab/orbit.hpp"
#include "horolab/periodic.hpp"
#include "horolab/surface.hpp"

using namespace horolab;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_power_sum(benchmark::State& st) {
    const auto n = static_cast<std::uint64_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(power_sum(1.0, 0.1, 3, 1.0, n, exec_of(st)).modulus);
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(n));
}

void BM_period_integral(benchmark::State& st) {
    const PeriodicPoint pt = make_periodic_point(1, st.range(0));
    const SurfaceFn f = SurfaceFn::above(2);
    for (auto _ : st) benchmark::DoNotOptimize(period_integral(f, pt, 0, 1e-4, kDefaultMaxSamples, 1.0, exec_of(st)).value);
}

void BM_birkhoff(benchmark::State& st) {
    const auto n = static_cast<std::uint64_t>(st.range(0));
    const Orbit orbit(OrbitPoint::generic(0.41421356237309504880L), SequenceSpec{PowerSparse{1.0, 0.05}, n});
    const auto fns = standard_test_functions();
    for (auto _ : st) benchmark::DoNotOptimize(birkhoff(orbit, fns, n, CoverageGrid{}, exec_of(st)).coverage);
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(n));
}

} // namespace

BENCHMARK(BM_power_sum)->ArgsProduct({{1 << 16, 1 << 20}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_period_integral)->ArgsProduct({{20, 50}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_birkhoff)->ArgsProduct({{1 << 16, 1 << 20}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
