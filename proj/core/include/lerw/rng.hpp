#pragma once

#include <cmath>
#include <cstdint>

namespace lerw {

/// Identifies one trial's random stream.  The stream is a pure function of
/// the pair, so trials can be replayed or distributed in any order.
struct SeedSpec {
    std::uint64_t experiment_seed = 0;
    std::uint64_t trial_index = 0;
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based per-trial generator: a splitmix64 stream whose starting
/// state is a hash of (experiment_seed, trial_index).  No shared state,
/// so distinct trials sample independently and identical SeedSpecs
/// reproduce bit-identical draws.
class TrialRng {
public:
    explicit TrialRng(SeedSpec seed)
        : state_(detail::mix64(detail::mix64(seed.experiment_seed + detail::kGolden) ^
                               (seed.trial_index * 0xD1B54A32D192ED03ULL + 1))) {}

    TrialRng(std::uint64_t experiment_seed, std::uint64_t trial_index)
        : TrialRng(SeedSpec{experiment_seed, trial_index}) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += detail::kGolden);
        return detail::mix64(z);
    }

    /// Uniform on {0,...,5}; three-bit rejection from a buffered word.
    int uniform_direction() {
        for (;;) {
            if (bits_left_ < 3) {
                buffer_ = next_u64();
                bits_left_ = 64;
            }
            int d = static_cast<int>(buffer_ & 7u);
            buffer_ >>= 3;
            bits_left_ -= 3;
            if (d < 6) return d;
        }
    }

    /// Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on {0,...,n-1} by rejection (n > 0).
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = n * (~std::uint64_t{0} / n);
        for (;;) {
            std::uint64_t v = next_u64();
            if (v < limit) return v % n;
        }
    }

    /// Standard normal via Box-Muller (explicit formula, so draws are
    /// reproducible across standard libraries).
    double standard_normal() {
        if (have_cached_normal_) {
            have_cached_normal_ = false;
            return cached_normal_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        cached_normal_ = r * std::sin(theta);
        have_cached_normal_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    std::uint64_t buffer_ = 0;
    int bits_left_ = 0;
    bool have_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace lerw
