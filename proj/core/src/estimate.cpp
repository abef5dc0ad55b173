#include "lerw/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace lerw {

namespace {

/// Kahan-compensated running sum.
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

double MomentSummary::covariance(std::size_t i, std::size_t j) const {
    if (n < 2) return 0.0;
    double cross = comoment[comoment_index(components(), i, j)];
    double nd = static_cast<double>(n);
    double sample_cov = (cross - nd * mean[i] * mean[j]) / (nd - 1.0);
    return sample_cov / nd;
}

Estimate MomentSummary::estimate(std::size_t component, std::string descriptor) const {
    return Estimate{mean[component], se[component], n, experiment_seed,
                    std::move(descriptor)};
}

VectorAccumulator::VectorAccumulator(std::size_t components, std::uint64_t experiment_seed)
    : components_(components), experiment_seed_(experiment_seed) {}

void VectorAccumulator::add_chunk(ChunkStats chunk) {
    if (chunk.sum.size() != components_)
        throw std::invalid_argument("VectorAccumulator: component count mismatch");
    chunks_.push_back(std::move(chunk));
}

void VectorAccumulator::merge(VectorAccumulator&& other) {
    if (other.components_ != components_)
        throw std::invalid_argument("VectorAccumulator: component count mismatch");
    for (auto& c : other.chunks_) chunks_.push_back(std::move(c));
    other.chunks_.clear();
}

MomentSummary VectorAccumulator::summarize() const {
    const std::size_t k = components_;
    const std::size_t pairs = k * (k + 1) / 2;

    std::vector<const ChunkStats*> ordered;
    ordered.reserve(chunks_.size());
    for (const auto& c : chunks_) ordered.push_back(&c);
    std::sort(ordered.begin(), ordered.end(),
              [](const ChunkStats* a, const ChunkStats* b) {
                  return a->first_trial < b->first_trial;
              });

    std::vector<Compensated> sums(k);
    std::vector<Compensated> cross(pairs);
    std::uint64_t n = 0;
    for (const ChunkStats* c : ordered) {
        n += c->count;
        for (std::size_t i = 0; i < k; ++i) sums[i].add(c->sum[i]);
        for (std::size_t i = 0; i < pairs; ++i) cross[i].add(c->comoment[i]);
    }

    MomentSummary out;
    out.n = n;
    out.experiment_seed = experiment_seed_;
    out.mean.resize(k, 0.0);
    out.se.resize(k, 0.0);
    out.comoment.resize(pairs, 0.0);
    for (std::size_t i = 0; i < pairs; ++i) out.comoment[i] = cross[i].total;
    if (n == 0) return out;
    for (std::size_t i = 0; i < k; ++i)
        out.mean[i] = sums[i].total / static_cast<double>(n);
    for (std::size_t i = 0; i < k; ++i) {
        double var = out.covariance(i, i);
        out.se[i] = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return out;
}

}  // namespace lerw
