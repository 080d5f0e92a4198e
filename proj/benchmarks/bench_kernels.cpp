#include <benchmark/benchmark.h>

#include <vector>

#include "lse/harness.hpp"
#include "lse/kernels.hpp"
#include "lse/oracle.hpp"
#include "lse/rng.hpp"

namespace {

lse::InputVector make_input(std::size_t n, const lse::FloatFormat& fmt) {
    lse::CounterRng rng(1, n);
    std::vector<double> v(n);
    for (auto& e : v) e = rng.uniform(-20.0, 20.0);
    return lse::InputVector::rounded(v, fmt);
}

void BM_RoundToFormat(benchmark::State& state) {
    lse::CounterRng rng(2, 0);
    std::vector<double> v(1024);
    for (auto& e : v) e = rng.uniform(-1e4, 1e4);
    const auto fmt = lse::fp16();
    for (auto _ : state) {
        for (double e : v) benchmark::DoNotOptimize(lse::round_to_format(e, fmt));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(v.size()));
}
BENCHMARK(BM_RoundToFormat);

template <lse::Algorithm Alg>
void BM_Native(benchmark::State& state) {
    const auto x = make_input(static_cast<std::size_t>(state.range(0)), lse::fp64());
    const auto ctx = lse::ArithmeticContext::native();
    for (auto _ : state) benchmark::DoNotOptimize(lse::evaluate(Alg, x, ctx));
}
BENCHMARK(BM_Native<lse::Algorithm::basic>)->Arg(10)->Arg(1000);
BENCHMARK(BM_Native<lse::Algorithm::shifted>)->Arg(10)->Arg(1000);

template <lse::Algorithm Alg>
void BM_Fp16(benchmark::State& state) {
    const auto x = make_input(static_cast<std::size_t>(state.range(0)), lse::fp16());
    const auto ctx = lse::ArithmeticContext::simulated(lse::fp16());
    for (auto _ : state) benchmark::DoNotOptimize(lse::evaluate(Alg, x, ctx));
}
BENCHMARK(BM_Fp16<lse::Algorithm::basic>)->Arg(10)->Arg(1000);
BENCHMARK(BM_Fp16<lse::Algorithm::shifted>)->Arg(10)->Arg(1000);
BENCHMARK(BM_Fp16<lse::Algorithm::alt_shifted>)->Arg(10)->Arg(1000);

void BM_Reference(benchmark::State& state) {
    const auto x = make_input(static_cast<std::size_t>(state.range(0)), lse::fp64());
    for (auto _ : state) benchmark::DoNotOptimize(lse::lse_softmax_reference(x));
}
BENCHMARK(BM_Reference)->Arg(10)->Arg(1000);

void BM_Experiment(benchmark::State& state) {
    const auto data = lse::generate(lse::DataSpec{lse::UniformGen{-20.0, 20.0}, 10, 2500, 42, lse::fp16()});
    for (auto _ : state) {
        benchmark::DoNotOptimize(lse::run_experiment(data, lse::fp16(), {static_cast<unsigned>(state.range(0))}));
    }
}
BENCHMARK(BM_Experiment)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
