#pragma once

#include <cstdint>
#include <vector>

#include "lerw/geometry.hpp"

namespace lerw::detail {

/// Packs coordinates into one key; valid for |coordinate| < 2^20, far
/// beyond any walk this code samples.
inline std::uint64_t pack_point(const LatticePoint& p) {
    constexpr std::int64_t offset = std::int64_t{1} << 20;
    return (static_cast<std::uint64_t>(p.x + offset) << 42) |
           (static_cast<std::uint64_t>(p.y + offset) << 21) |
           static_cast<std::uint64_t>(p.z + offset);
}

/// Open-addressing map point -> int64, tuned for the loop-erasure inner
/// loop: one flat entry array (one cache line per probe), linear probing,
/// epoch-stamped clear so a thread reuses the map across millions of
/// trials without rehashing.
class PointIndexMap {
public:
    void reset(std::size_t expected_entries) {
        std::size_t want = 64;
        while (want < expected_entries + expected_entries / 2) want <<= 1;
        if (want > entries_.size()) {
            entries_.assign(want, Entry{});
            epoch_ = 1;
            mask_ = want - 1;
        } else {
            ++epoch_;
            if (epoch_ == 0) {  // stamp wraparound: start fresh
                std::fill(entries_.begin(), entries_.end(), Entry{});
                epoch_ = 1;
            }
        }
        size_ = 0;
    }

    /// Inserts key -> value unless the key is already present.
    void insert_if_absent(std::uint64_t key, std::int64_t value) {
        if (size_ + size_ / 2 >= entries_.size()) grow();
        Entry& e = entries_[probe(key)];
        if (e.stamp != epoch_) {
            e.stamp = epoch_;
            e.key = key;
            e.value = value;
            ++size_;
        }
    }

    /// Value stored for the key; key must be present.
    std::int64_t get(std::uint64_t key) const { return entries_[probe(key)].value; }

    bool contains(std::uint64_t key) const {
        return entries_[probe(key)].stamp == epoch_;
    }

private:
    struct Entry {
        std::uint64_t key = 0;
        std::int64_t value = 0;
        std::uint32_t stamp = 0;
    };

    std::size_t probe(std::uint64_t key) const {
        std::size_t slot = static_cast<std::size_t>(key * 0x9E3779B97F4A7C15ULL >> 17) & mask_;
        while (entries_[slot].stamp == epoch_ && entries_[slot].key != key)
            slot = (slot + 1) & mask_;
        return slot;
    }

    void grow() {
        std::vector<Entry> old = std::move(entries_);
        std::uint32_t old_epoch = epoch_;
        entries_.assign(old.size() * 2, Entry{});
        epoch_ = 1;
        mask_ = entries_.size() - 1;
        size_ = 0;
        for (const Entry& e : old)
            if (e.stamp == old_epoch) insert_if_absent(e.key, e.value);
    }

    std::vector<Entry> entries_;
    std::size_t mask_ = 0;
    std::size_t size_ = 0;
    std::uint32_t epoch_ = 0;
};

}  // namespace lerw::detail
