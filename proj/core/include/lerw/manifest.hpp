#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lerw/geometry.hpp"

namespace lerw {

/// Parse or validation failure; carries the offending line (0 when the
/// problem is semantic rather than syntactic) and field name.
class ManifestError : public std::runtime_error {
public:
    ManifestError(int line, std::string field, const std::string& message)
        : std::runtime_error(message), line_(line), field_(std::move(field)) {}

    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

/// One experiment: a single estimator swept over a parameter grid.  The
/// pair (manifest, seed) pins every record bit-exactly; each grid cell
/// owns a disjoint trial-index range.
struct ExperimentManifest {
    int schema = 1;
    std::string name;
    std::string estimator;
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    int workers = 0;  // 0: hardware concurrency
    std::string out_dir = "results";

    // grid axes (which ones apply depends on the estimator)
    std::vector<double> m_list;
    Vec3 x{0.5, 0.0, 0.0};
    Vec3 z{};
    Vec3 w{};
    bool has_z = false;
    bool has_w = false;
    std::vector<double> r_list;
    double r2 = 0.0;
    std::string mode = "points";  // two_point: points | balls
    double truncation = 8.0;      // ilerw truncation factor K
    std::vector<double> s_list;
    std::vector<DyadicBox> boxes;
    std::optional<double> beta;
    std::string calibration_path;

    /// Canonical reproducible serialization (sorted keys, full precision);
    /// input to the manifest hash.
    std::string canonical_text() const;

    /// FNV-1a over canonical_text().
    std::string hash() const;
};

ExperimentManifest parse_manifest(std::istream& in);
ExperimentManifest parse_manifest_file(const std::string& path);

/// Grid-cell and record-level checks that do not need sampling: known
/// estimator, required axes present, estimator preconditions.  Throws
/// ManifestError naming the field/cell.
void validate_manifest(const ExperimentManifest& manifest);

/// "k=v;k=v" cell keys, one per grid cell, in execution order.
std::vector<std::string> manifest_cell_keys(const ExperimentManifest& manifest);

}  // namespace lerw
