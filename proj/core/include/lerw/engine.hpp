#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "lerw/estimate.hpp"
#include "lerw/rng.hpp"

namespace lerw {

/// One trial: draw everything from `rng`, write one value per component.
/// Kernels must be pure functions of the rng stream so that trial order
/// and thread placement cannot change results.
using TrialKernel = std::function<void(TrialRng& rng, std::span<double> out)>;

/// Trials per accumulator chunk.  Fixed (never derived from the worker
/// count) so the chunk partition, and therefore the folded sums, are a
/// function of the manifest alone.
inline constexpr std::uint64_t kTrialsPerChunk = 1024;

/// Runs `trials` independent trials of `kernel` with trial indices
/// first_trial .. first_trial+trials-1 on `workers` threads and folds the
/// per-chunk sums in fixed order.  Results are bit-identical for any
/// worker count.
MomentSummary run_trials(const TrialKernel& kernel, std::size_t components,
                         std::uint64_t experiment_seed, std::uint64_t first_trial,
                         std::uint64_t trials, int workers);

/// Sequential accumulation of one chunk (exposed for tests and custom
/// drivers; run_trials uses it internally).
ChunkStats accumulate_chunk(const TrialKernel& kernel, std::size_t components,
                            std::uint64_t experiment_seed, std::uint64_t first_trial,
                            std::uint64_t count);

/// Default worker count: hardware concurrency, at least 1.
int default_workers();

}  // namespace lerw
