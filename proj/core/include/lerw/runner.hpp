#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lerw/manifest.hpp"
#include "lerw/records.hpp"

namespace lerw {

/// An estimator precondition failed for one grid cell.
class CellPreconditionError : public std::runtime_error {
public:
    CellPreconditionError(std::string cell, const std::string& message)
        : std::runtime_error(message), cell_(std::move(cell)) {}

    const std::string& cell() const { return cell_; }

private:
    std::string cell_;
};

/// The fitted growth exponent every beta-dependent estimator defaults to.
/// Always produced by a calibration run of this code base, never typed in
/// from the outside.
struct BetaCalibration {
    double beta = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::string manifest_hash;
    std::string date;
    std::string code_version;
};

void write_calibration_file(const std::filesystem::path& path,
                            const BetaCalibration& calibration);

/// Throws std::invalid_argument when the file is missing or malformed.
BetaCalibration read_calibration_file(const std::filesystem::path& path);

struct RunOutcome {
    std::size_t cells_total = 0;
    std::size_t cells_run = 0;
    std::size_t cells_skipped = 0;  // already complete (resume)
    std::vector<ResultRecord> new_records;
    std::filesystem::path records_file;
    std::filesystem::path summary_file;
};

/// Executes every grid cell of the manifest (skipping cells whose records
/// already exist for the same manifest hash), appends JSONL records and
/// rewrites the summary CSV.  Preconditions of all cells are checked
/// before any sampling starts.
RunOutcome run_manifest(const ExperimentManifest& manifest,
                        const std::filesystem::path& out_dir,
                        int workers_override = 0,
                        std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace lerw
