#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "lerw/loop_erasure.hpp"
#include "lerw/walk.hpp"

namespace lerw {

/// Binary path container, little-endian throughout:
///   bytes 0..7   magic "LERWPATH"
///   bytes 8..11  u32 format version (currently 1)
///   bytes 12..15 u32 flags (bit 0: path is loop-erased)
///   bytes 16..23 f64 mesh scale m
///   bytes 24..47 i64 x,y,z of the start site (lattice units)
///   bytes 48..55 u64 step count
///   then steps at 3 bits each (2-bit axis 0=x,1=y,2=z, then a sign bit,
///   1 meaning the negative direction), packed least-significant-bit
///   first into successive bytes.
struct PathDump {
    LatticePath path;
    bool loop_erased = false;
};

inline constexpr std::uint32_t kPathFormatVersion = 1;
inline constexpr std::uint32_t kPathFlagLoopErased = 1u;

void write_path(std::ostream& os, const LatticePath& path, bool loop_erased = false);
void write_path(std::ostream& os, const SelfAvoidingPath& path);

/// Throws std::runtime_error on bad magic, version, or truncation.
PathDump read_path(std::istream& is);

void write_path_file(const std::string& filename, const LatticePath& path,
                     bool loop_erased = false);
PathDump read_path_file(const std::string& filename);

}  // namespace lerw
