#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace lerw {

/// Monte Carlo mean with its standard error and seed provenance.
struct Estimate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::uint64_t n_trials = 0;
    std::uint64_t experiment_seed = 0;
    std::string descriptor;
};

/// Partial sums over one contiguous block of trial indices.  `sum` holds
/// per-component totals, `comoment` the upper triangle of sum(x_i * x_j)
/// so that covariances between components survive merging.
struct ChunkStats {
    std::uint64_t first_trial = 0;
    std::uint64_t count = 0;
    std::vector<double> sum;
    std::vector<double> comoment;
};

inline std::size_t comoment_index(std::size_t k, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * k - i * (i - 1) / 2 + (j - i);
}

/// Folded moments.  Means, their standard errors, and the covariance
/// matrix of the vector of means (needed for delta-method ratios).
struct MomentSummary {
    std::uint64_t n = 0;
    std::uint64_t experiment_seed = 0;
    std::vector<double> mean;
    std::vector<double> se;
    std::vector<double> comoment;

    std::size_t components() const { return mean.size(); }

    /// Covariance of (mean_i, mean_j).
    double covariance(std::size_t i, std::size_t j) const;

    Estimate estimate(std::size_t component, std::string descriptor) const;
};

/// Collects per-chunk partial sums.  Chunks may arrive in any order from
/// any number of workers; summarize() folds them in ascending trial-index
/// order with compensated summation, so the result is bit-identical no
/// matter how the work was split.
class VectorAccumulator {
public:
    explicit VectorAccumulator(std::size_t components, std::uint64_t experiment_seed = 0);

    std::size_t components() const { return components_; }

    void add_chunk(ChunkStats chunk);
    void merge(VectorAccumulator&& other);

    MomentSummary summarize() const;

private:
    std::size_t components_;
    std::uint64_t experiment_seed_;
    std::vector<ChunkStats> chunks_;
};

}  // namespace lerw
