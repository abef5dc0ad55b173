#include <benchmark/benchmark.h>

#include "lerw/walk.hpp"

using namespace lerw;

static void BM_SrwUntilExit(benchmark::State& state) {
    const BallDomain domain{static_cast<double>(state.range(0)), {}};
    std::uint64_t trial = 0;
    std::uint64_t steps = 0;
    for (auto _ : state) {
        TrialRng rng(1, trial++);
        LatticePath path = srw_until_exit(domain, {0, 0, 0}, rng);
        steps += path.step_count();
        benchmark::DoNotOptimize(path.points.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_SrwUntilExit)->Arg(32)->Arg(128)->Arg(256);

static void BM_TransientWalk(benchmark::State& state) {
    std::uint64_t trial = 0;
    std::uint64_t steps = 0;
    for (auto _ : state) {
        TrialRng rng(2, trial++);
        LatticePath path = srw_transient({0, 0, 0}, static_cast<double>(state.range(0)), rng);
        steps += path.step_count();
        benchmark::DoNotOptimize(path.points.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_TransientWalk)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
