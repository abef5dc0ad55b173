#include "lerw/records.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lerw {

using nlohmann::ordered_json;

ordered_json ResultRecord::to_json() const {
    ordered_json j;
    j["estimator"] = estimator;
    j["descriptor"] = descriptor;
    j["cell"] = cell_key;
    j["manifest_hash"] = manifest_hash;
    j["params"] = params;
    j["mean"] = mean;
    j["stderr"] = stderr_of_mean;
    j["n_trials"] = n_trials;
    j["seed"] = seed;
    j["wall_time_s"] = wall_time_s;
    j["timestamp"] = timestamp;
    j["code_version"] = code_version;
    return j;
}

ResultRecord ResultRecord::from_json(const ordered_json& j) {
    ResultRecord r;
    r.estimator = j.at("estimator").get<std::string>();
    r.descriptor = j.at("descriptor").get<std::string>();
    r.cell_key = j.at("cell").get<std::string>();
    r.manifest_hash = j.at("manifest_hash").get<std::string>();
    r.params = j.at("params");
    r.mean = j.at("mean").get<double>();
    r.stderr_of_mean = j.at("stderr").get<double>();
    r.n_trials = j.at("n_trials").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.wall_time_s = j.value("wall_time_s", 0.0);
    r.timestamp = j.value("timestamp", std::string{});
    r.code_version = j.value("code_version", std::string{});
    return r;
}

RecordStore::RecordStore(std::filesystem::path file) : file_(std::move(file)) {}

std::vector<ResultRecord> RecordStore::load() const {
    std::vector<ResultRecord> records;
    std::ifstream in(file_);
    if (!in) return records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        records.push_back(ResultRecord::from_json(ordered_json::parse(line)));
    }
    return records;
}

bool RecordStore::has_cell(const std::string& manifest_hash,
                           const std::string& cell_key) const {
    for (const ResultRecord& r : load())
        if (r.manifest_hash == manifest_hash && r.cell_key == cell_key) return true;
    return false;
}

void RecordStore::append(std::span<const ResultRecord> records) {
    if (records.empty()) return;
    std::filesystem::create_directories(file_.parent_path());
    std::ostringstream block;
    for (const ResultRecord& r : records) block << r.to_json().dump() << '\n';
    std::ofstream out(file_, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to " + file_.string());
    out << block.str();
    out.flush();
}

namespace {

std::vector<const ResultRecord*> sorted_view(std::span<const ResultRecord> records) {
    std::vector<const ResultRecord*> view;
    view.reserve(records.size());
    for (const ResultRecord& r : records) view.push_back(&r);
    std::sort(view.begin(), view.end(),
              [](const ResultRecord* a, const ResultRecord* b) {
                  if (a->cell_key != b->cell_key) return a->cell_key < b->cell_key;
                  return a->descriptor < b->descriptor;
              });
    return view;
}

}  // namespace

void write_summary_csv(const std::filesystem::path& file,
                       std::span<const ResultRecord> records) {
    if (!file.parent_path().empty())
        std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "cell,descriptor,params,mean,stderr,n_trials,seed\n";
    for (const ResultRecord* r : sorted_view(records)) {
        std::string params = r->params.dump();
        std::replace(params.begin(), params.end(), ',', ';');
        out << r->cell_key << ',' << r->descriptor << ',' << params << ','
            << std::setprecision(17) << r->mean << ',' << r->stderr_of_mean << ','
            << r->n_trials << ',' << r->seed << '\n';
    }
}

std::string canonical_records(std::span<const ResultRecord> records) {
    std::ostringstream out;
    for (const ResultRecord* r : sorted_view(records)) {
        ordered_json j = r->to_json();
        j.erase("wall_time_s");
        j.erase("timestamp");
        out << j.dump() << '\n';
    }
    return out.str();
}

std::string current_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace lerw
