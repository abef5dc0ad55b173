#include <benchmark/benchmark.h>

#include "lerw/loop_erasure.hpp"
#include "lerw/occupation.hpp"

using namespace lerw;

static void BM_MinkowskiContent(benchmark::State& state) {
    const double mesh = 128.0;
    SelfAvoidingPath curve = lerw_sample(BallDomain{mesh, {}}, SeedSpec{5, 17});
    DyadicBox box{3, {3, 0, 0}};
    const double s = static_cast<double>(state.range(0));
    for (auto _ : state) {
        MinkowskiSample sample = minkowski_content(curve, box, s, 1.62, 8);
        benchmark::DoNotOptimize(sample.value);
    }
}
BENCHMARK(BM_MinkowskiContent)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMicrosecond);

static void BM_OccupationMeasure(benchmark::State& state) {
    SelfAvoidingPath curve = lerw_sample(BallDomain{128.0, {}}, SeedSpec{6, 2});
    for (auto _ : state) {
        OccupationMeasure measure = occupation_measure(
            curve, 3, OccupationNormalization::Explicit, std::pow(128.0, 1.62));
        benchmark::DoNotOptimize(measure.counts.size());
    }
}
BENCHMARK(BM_OccupationMeasure);
