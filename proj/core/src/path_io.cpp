#include "lerw/path_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lerw {

namespace {

constexpr char kMagic[8] = {'L', 'E', 'R', 'W', 'P', 'A', 'T', 'H'};

template <typename T>
void put(std::ostream& os, T value) {
    std::array<unsigned char, sizeof(T)> raw;
    std::memcpy(raw.data(), &value, sizeof(T));
    os.write(reinterpret_cast<const char*>(raw.data()), sizeof(T));
}

template <typename T>
T take(std::istream& is) {
    std::array<unsigned char, sizeof(T)> raw;
    is.read(reinterpret_cast<char*>(raw.data()), sizeof(T));
    if (!is) throw std::runtime_error("path read: truncated header");
    T value;
    std::memcpy(&value, raw.data(), sizeof(T));
    return value;
}

int step_code(const LatticePoint& from, const LatticePoint& to) {
    LatticePoint d = to - from;
    if (d == LatticePoint{1, 0, 0}) return 0;
    if (d == LatticePoint{-1, 0, 0}) return 4;
    if (d == LatticePoint{0, 1, 0}) return 1;
    if (d == LatticePoint{0, -1, 0}) return 5;
    if (d == LatticePoint{0, 0, 1}) return 2;
    if (d == LatticePoint{0, 0, -1}) return 6;
    throw std::invalid_argument("path write: consecutive points are not neighbors");
}

LatticePoint step_delta(int code) {
    int axis = code & 3;
    if (axis > 2) throw std::runtime_error("path read: bad axis code");
    std::int64_t sign = (code & 4) ? -1 : 1;
    LatticePoint d{};
    if (axis == 0) d.x = sign;
    if (axis == 1) d.y = sign;
    if (axis == 2) d.z = sign;
    return d;
}

}  // namespace

void write_path(std::ostream& os, const LatticePath& path, bool loop_erased) {
    if (path.points.empty())
        throw std::invalid_argument("path write: empty path");
    os.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(os, kPathFormatVersion);
    put<std::uint32_t>(os, loop_erased ? kPathFlagLoopErased : 0u);
    put<double>(os, path.mesh);
    put<std::int64_t>(os, path.points.front().x);
    put<std::int64_t>(os, path.points.front().y);
    put<std::int64_t>(os, path.points.front().z);
    put<std::uint64_t>(os, path.step_count());

    std::uint64_t bits = 0;
    int filled = 0;
    for (std::size_t i = 1; i < path.points.size(); ++i) {
        auto code = static_cast<std::uint64_t>(step_code(path.points[i - 1], path.points[i]));
        bits |= code << filled;
        filled += 3;
        while (filled >= 8) {
            put<std::uint8_t>(os, static_cast<std::uint8_t>(bits & 0xFF));
            bits >>= 8;
            filled -= 8;
        }
    }
    if (filled > 0) put<std::uint8_t>(os, static_cast<std::uint8_t>(bits & 0xFF));
}

void write_path(std::ostream& os, const SelfAvoidingPath& path) {
    LatticePath as_walk{path.points, path.mesh};
    write_path(os, as_walk, true);
}

PathDump read_path(std::istream& is) {
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("path read: bad magic");
    auto version = take<std::uint32_t>(is);
    if (version != kPathFormatVersion)
        throw std::runtime_error("path read: unsupported version");
    auto flags = take<std::uint32_t>(is);

    PathDump dump;
    dump.loop_erased = (flags & kPathFlagLoopErased) != 0;
    dump.path.mesh = take<double>(is);
    LatticePoint at{take<std::int64_t>(is), take<std::int64_t>(is), take<std::int64_t>(is)};
    auto steps = take<std::uint64_t>(is);

    dump.path.points.reserve(steps + 1);
    dump.path.points.push_back(at);
    std::uint64_t bits = 0;
    int avail = 0;
    for (std::uint64_t s = 0; s < steps; ++s) {
        while (avail < 3) {
            bits |= static_cast<std::uint64_t>(take<std::uint8_t>(is)) << avail;
            avail += 8;
        }
        int code = static_cast<int>(bits & 7u);
        bits >>= 3;
        avail -= 3;
        at = at + step_delta(code);
        dump.path.points.push_back(at);
    }
    return dump;
}

void write_path_file(const std::string& filename, const LatticePath& path,
                     bool loop_erased) {
    std::ofstream os(filename, std::ios::binary);
    if (!os) throw std::runtime_error("path write: cannot open " + filename);
    write_path(os, path, loop_erased);
}

PathDump read_path_file(const std::string& filename) {
    std::ifstream is(filename, std::ios::binary);
    if (!is) throw std::runtime_error("path read: cannot open " + filename);
    return read_path(is);
}

}  // namespace lerw
