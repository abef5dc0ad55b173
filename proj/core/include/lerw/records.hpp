#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace lerw {

/// One JSONL line of results.jsonl.  wall_time_s and timestamp are
/// provenance only; every other field is part of the deterministic
/// contract (identical manifests reproduce them byte for byte).
struct ResultRecord {
    std::string estimator;
    std::string descriptor;
    std::string cell_key;
    std::string manifest_hash;
    nlohmann::ordered_json params;  // object
    double mean = 0.0;
    double stderr_of_mean = 0.0;
    std::uint64_t n_trials = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    std::string timestamp;
    std::string code_version;

    nlohmann::ordered_json to_json() const;
    static ResultRecord from_json(const nlohmann::ordered_json& j);
};

/// Append-only JSONL store; a cell's records are written with one flush
/// so a completed cell is either fully present or absent.
class RecordStore {
public:
    explicit RecordStore(std::filesystem::path file);

    const std::filesystem::path& path() const { return file_; }

    std::vector<ResultRecord> load() const;
    bool has_cell(const std::string& manifest_hash, const std::string& cell_key) const;
    void append(std::span<const ResultRecord> records);

private:
    std::filesystem::path file_;
};

/// Plot-ready summary, one row per record, sorted by (cell, descriptor).
void write_summary_csv(const std::filesystem::path& file,
                       std::span<const ResultRecord> records);

/// Deterministic serialization for comparing runs: records sorted by
/// (cell, descriptor) with the volatile provenance fields removed.
std::string canonical_records(std::span<const ResultRecord> records);

std::string current_timestamp();

}  // namespace lerw
