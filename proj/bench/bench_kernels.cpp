// Serial reference kernels against the OpenMP versions, plus sweeps in both modes.
#include <benchmark/benchmark.h>

#include "qctx/kernels.hpp"
#include "qctx/random.hpp"
#include "qctx/sweeps.hpp"

using namespace qctx;

namespace {

template <bool Parallel>
void BM_Matmul(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1, n);
    const ComplexMatrix a = random_ginibre(n, rng), b = random_ginibre(n, rng);
    ComplexMatrix out(n);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::omp::matmul(a.data(), b.data(), out.data(), n);
        } else {
            kernels::serial::matmul(a.data(), b.data(), out.data(), n);
        }
        benchmark::DoNotOptimize(out.data().data());
    }
    state.SetComplexityN(state.range(0));
}

template <bool Parallel>
void BM_Tensor(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(2, n);
    const ComplexMatrix a = random_ginibre(n, rng), b = random_ginibre(n, rng);
    ComplexMatrix out(n * n);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::omp::tensor(a.data(), n, b.data(), n, out.data());
        } else {
            kernels::serial::tensor(a.data(), n, b.data(), n, out.data());
        }
        benchmark::DoNotOptimize(out.data().data());
    }
}

template <bool Parallel>
void BM_PartialTrace(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(3, n);
    const ComplexMatrix m = random_ginibre(n * n, rng);
    ComplexMatrix out(n);
    for (auto _ : state) {
        if constexpr (Parallel) {
            kernels::omp::partial_trace_right(m.data(), n, n, out.data());
        } else {
            kernels::serial::partial_trace_right(m.data(), n, n, out.data());
        }
        benchmark::DoNotOptimize(out.data().data());
    }
}

template <bool Parallel>
void BM_TsirelsonSweep(benchmark::State& state) {
    SweepOptions opt;
    opt.seed = 9;
    opt.samples = static_cast<std::size_t>(state.range(0));
    opt.parallel = Parallel;
    for (auto _ : state) benchmark::DoNotOptimize(tsirelson_sweep(opt).max);
}

template <bool Parallel>
void BM_InstrumentSweep(benchmark::State& state) {
    SweepOptions opt;
    opt.seed = 10;
    opt.samples = static_cast<std::size_t>(state.range(0));
    opt.dim_b = 3;
    opt.parallel = Parallel;
    for (auto _ : state) benchmark::DoNotOptimize(instrument_sweep(opt).min);
}

}  // namespace

BENCHMARK(BM_Matmul<false>)->Name("matmul/serial")->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(BM_Matmul<true>)->Name("matmul/omp")->RangeMultiplier(2)->Range(16, 256);
BENCHMARK(BM_Tensor<false>)->Name("tensor/serial")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_Tensor<true>)->Name("tensor/omp")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_PartialTrace<false>)->Name("partial_trace/serial")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_PartialTrace<true>)->Name("partial_trace/omp")->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_TsirelsonSweep<false>)->Name("tsirelson_sweep/serial")->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TsirelsonSweep<true>)->Name("tsirelson_sweep/omp")->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InstrumentSweep<false>)->Name("instrument_sweep/serial")->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InstrumentSweep<true>)->Name("instrument_sweep/omp")->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
