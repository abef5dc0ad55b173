#include <benchmark/benchmark.h>

#include "lerw/loop_erasure.hpp"
#include "lerw/walk.hpp"

using namespace lerw;

static void BM_LoopErase(benchmark::State& state) {
    const BallDomain domain{static_cast<double>(state.range(0)), {}};
    TrialRng rng(3, 0);
    LatticePath walk = srw_until_exit(domain, {0, 0, 0}, rng);
    std::uint64_t steps = 0;
    for (auto _ : state) {
        SelfAvoidingPath erased = loop_erase(walk);
        steps += walk.step_count();
        benchmark::DoNotOptimize(erased.points.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_LoopErase)->Arg(32)->Arg(128)->Arg(256);

static void BM_LerwSample(benchmark::State& state) {
    const BallDomain domain{static_cast<double>(state.range(0)), {}};
    std::uint64_t trial = 0;
    for (auto _ : state) {
        TrialRng rng(4, trial++);
        SelfAvoidingPath curve = lerw_sample(domain, rng);
        benchmark::DoNotOptimize(curve.points.data());
    }
}
BENCHMARK(BM_LerwSample)->Arg(32)->Arg(64)->Arg(128);
