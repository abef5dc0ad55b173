#include <benchmark/benchmark.h>

#include "lerw/harmonic.hpp"

using namespace lerw;

static void BM_HittingField(benchmark::State& state) {
    const BallDomain domain{static_cast<double>(state.range(0)), {}};
    for (auto _ : state) {
        ScalarField field = hitting_field(domain, {0, 0, 0});
        benchmark::DoNotOptimize(field.values().data());
    }
}
BENCHMARK(BM_HittingField)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_GreenFunction(benchmark::State& state) {
    const BallDomain domain{static_cast<double>(state.range(0)), {}};
    for (auto _ : state) {
        ScalarField field = green_function(domain, {0, 0, 0});
        benchmark::DoNotOptimize(field.values().data());
    }
}
BENCHMARK(BM_GreenFunction)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
