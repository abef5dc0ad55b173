#include "lerw/engine.hpp"

#include <atomic>
#include <thread>
#include <vector>

namespace lerw {

namespace {

struct Compensated {
    double total = 0.0;
    double carry = 0.0;

    void add(double v) {
        double y = v - carry;
        double t = total + y;
        carry = (t - total) - y;
        total = t;
    }
};

}  // namespace

ChunkStats accumulate_chunk(const TrialKernel& kernel, std::size_t components,
                            std::uint64_t experiment_seed, std::uint64_t first_trial,
                            std::uint64_t count) {
    const std::size_t pairs = components * (components + 1) / 2;
    std::vector<Compensated> sums(components);
    std::vector<Compensated> cross(pairs);
    std::vector<double> values(components);

    for (std::uint64_t t = 0; t < count; ++t) {
        TrialRng rng(SeedSpec{experiment_seed, first_trial + t});
        kernel(rng, values);
        for (std::size_t i = 0; i < components; ++i) sums[i].add(values[i]);
        std::size_t idx = 0;
        for (std::size_t i = 0; i < components; ++i)
            for (std::size_t j = i; j < components; ++j)
                cross[idx++].add(values[i] * values[j]);
    }

    ChunkStats out;
    out.first_trial = first_trial;
    out.count = count;
    out.sum.resize(components);
    out.comoment.resize(pairs);
    for (std::size_t i = 0; i < components; ++i) out.sum[i] = sums[i].total;
    for (std::size_t i = 0; i < pairs; ++i) out.comoment[i] = cross[i].total;
    return out;
}

MomentSummary run_trials(const TrialKernel& kernel, std::size_t components,
                         std::uint64_t experiment_seed, std::uint64_t first_trial,
                         std::uint64_t trials, int workers) {
    const std::uint64_t n_chunks = (trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
    std::vector<ChunkStats> partials(n_chunks);

    auto run_chunk = [&](std::uint64_t c) {
        std::uint64_t begin = c * kTrialsPerChunk;
        std::uint64_t count = std::min(kTrialsPerChunk, trials - begin);
        partials[c] = accumulate_chunk(kernel, components, experiment_seed,
                                       first_trial + begin, count);
    };

    if (workers <= 1 || n_chunks <= 1) {
        for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    } else {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::uint64_t c = next.fetch_add(1);
                if (c >= n_chunks) return;
                run_chunk(c);
            }
        };
        std::vector<std::thread> pool;
        auto n_threads = std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n_chunks);
        pool.reserve(n_threads);
        for (std::uint64_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    VectorAccumulator acc(components, experiment_seed);
    for (auto& p : partials) acc.add_chunk(std::move(p));
    return acc.summarize();
}

int default_workers() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace lerw
