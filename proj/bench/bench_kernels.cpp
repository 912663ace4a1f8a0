// Serial reference vs OpenMP kernels: root-subset enumeration, Jacobi identity, involution.

#include <benchmark/benchmark.h>

#include "voltkit/integrals.hpp"
#include "voltkit/laxkit.hpp"
#include "voltkit/poisson.hpp"
#include "voltkit/verify.hpp"

using namespace voltkit;

namespace {

void BM_EnumerateSerial(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_serial(n).lax_count());
}

void BM_EnumerateParallel(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    for (auto _ : st) benchmark::DoNotOptimize(enumerate_parallel(n, 0).lax_count());
}

void BM_JacobiSerial(benchmark::State& st) {
    auto pi = twodiag_poisson(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(jacobi_check_serial(pi.pi).ok);
}

void BM_JacobiParallel(benchmark::State& st) {
    auto pi = twodiag_poisson(static_cast<std::size_t>(st.range(0)), static_cast<std::size_t>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(jacobi_check_parallel(pi.pi).ok);
}

IntegralSet trace_set(const LaxPair& lp) {
    IntegralSet set;
    for (unsigned k = 2; k <= lp.L.dim(); ++k)
        set.polys.push_back({"H" + std::to_string(k), trace_power(lp.L, k), ""});
    return set;
}

void BM_InvolutionSerial(benchmark::State& st) {
    const auto m = static_cast<std::size_t>(st.range(0)), n = static_cast<std::size_t>(st.range(1));
    auto set = trace_set(two_diagonal_family(m, n));
    auto pi = twodiag_poisson(m, n);
    for (auto _ : st) benchmark::DoNotOptimize(check_involution_serial(set, pi).passed());
}

void BM_InvolutionParallel(benchmark::State& st) {
    const auto m = static_cast<std::size_t>(st.range(0)), n = static_cast<std::size_t>(st.range(1));
    auto set = trace_set(two_diagonal_family(m, n));
    auto pi = twodiag_poisson(m, n);
    for (auto _ : st) benchmark::DoNotOptimize(check_involution_parallel(set, pi).passed());
}

} // namespace

BENCHMARK(BM_EnumerateSerial)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerateParallel)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_JacobiSerial)->Args({2, 9})->Args({4, 10})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JacobiParallel)->Args({2, 9})->Args({4, 10})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_InvolutionSerial)->Args({2, 7})->Args({3, 8})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InvolutionParallel)->Args({2, 7})->Args({3, 8})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
