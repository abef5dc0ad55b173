#include "lerw/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "lerw/analysis.hpp"
#include "lerw/engine.hpp"
#include "lerw/estimators.hpp"
#include "lerw/version.hpp"

namespace lerw {

namespace {

using nlohmann::ordered_json;

ordered_json vec3_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

struct CellPlan {
    std::string key;
    // trials == 0 makes a validation pass: preconditions run, sampling does not
    std::function<std::vector<ResultRecord>(int workers, std::uint64_t trials)> run;
};

ResultRecord base_record(const ExperimentManifest& manifest, const std::string& cell,
                         const Estimate& est, ordered_json params) {
    ResultRecord r;
    r.estimator = manifest.estimator;
    r.descriptor = est.descriptor;
    r.cell_key = cell;
    r.manifest_hash = manifest.hash();
    r.params = std::move(params);
    r.mean = est.mean;
    r.stderr_of_mean = est.stderr_of_mean;
    r.n_trials = est.n_trials;
    r.seed = est.experiment_seed;
    r.code_version = kCodeVersion;
    return r;
}

double resolve_beta(const ExperimentManifest& manifest) {
    if (manifest.beta) return *manifest.beta;
    return read_calibration_file(manifest.calibration_path).beta;
}

std::vector<CellPlan> plan_cells(const ExperimentManifest& manifest,
                                 std::uint64_t seed) {
    std::vector<CellPlan> plans;
    const std::vector<std::string> keys = manifest_cell_keys(manifest);
    const std::string& e = manifest.estimator;

    for (std::size_t i = 0; i < manifest.m_list.size(); ++i) {
        const double m = manifest.m_list[i];
        const std::string key = keys[i];
        const std::uint64_t first = static_cast<std::uint64_t>(i) * manifest.trials;

        CellPlan plan;
        plan.key = key;
        if (e == "length") {
            plan.run = [m, key, first, seed, &manifest](int workers, std::uint64_t trials) {
                Estimate est = estimate_length(m, trials, seed, workers, first);
                return std::vector<ResultRecord>{
                    base_record(manifest, key, est, ordered_json{{"m", m}})};
            };
        } else if (e == "one_point") {
            plan.run = [m, key, first, seed, &manifest](int workers, std::uint64_t trials) {
                Estimate est =
                    estimate_one_point(manifest.x, m, trials, seed, workers, first);
                return std::vector<ResultRecord>{base_record(
                    manifest, key, est,
                    ordered_json{{"m", m}, {"x", vec3_json(manifest.x)}})};
            };
        } else if (e == "ilerw_one_point") {
            plan.run = [m, key, first, seed, &manifest](int workers, std::uint64_t trials) {
                Estimate est = estimate_ilerw_one_point(
                    manifest.x, m, manifest.truncation, trials, seed, workers, first);
                return std::vector<ResultRecord>{base_record(
                    manifest, key, est,
                    ordered_json{{"m", m},
                                 {"x", vec3_json(manifest.x)},
                                 {"K", manifest.truncation}})};
            };
        } else if (e == "ball_hit") {
            plan.run = [m, key, first, seed, &manifest](int workers, std::uint64_t trials) {
                std::vector<Estimate> ests = estimate_ball_hit_profile(
                    manifest.x, manifest.r_list, m, trials, seed, workers, first);
                std::vector<ResultRecord> records;
                for (std::size_t k = 0; k < ests.size(); ++k)
                    records.push_back(base_record(
                        manifest, key, ests[k],
                        ordered_json{{"m", m},
                                     {"r", manifest.r_list[k]},
                                     {"x", vec3_json(manifest.x)}}));
                return records;
            };
        } else if (e == "two_point") {
            plan.run = [m, key, first, seed, &manifest](int workers, std::uint64_t trials) {
                TwoPointMode mode = manifest.mode == "balls" ? TwoPointMode::BallBall
                                                             : TwoPointMode::PointPoint;
                double r = manifest.r_list.empty() ? 0.0 : manifest.r_list.front();
                double r2 = manifest.r2 > 0.0 ? manifest.r2 : r;
                Estimate est = estimate_two_point(manifest.z, manifest.w, mode, r, r2,
                                                  m, trials, seed, workers, first);
                return std::vector<ResultRecord>{base_record(
                    manifest, key, est,
                    ordered_json{{"m", m},
                                 {"z", vec3_json(manifest.z)},
                                 {"w", vec3_json(manifest.w)},
                                 {"mode", manifest.mode},
                                 {"r", r},
                                 {"r2", r2}})};
            };
        } else if (e == "es") {
            plan.run = [m, key, first, seed, &manifest](int workers, std::uint64_t trials) {
                Estimate est = estimate_es(static_cast<std::int64_t>(m), trials, seed,
                                           workers, first);
                return std::vector<ResultRecord>{
                    base_record(manifest, key, est, ordered_json{{"m", m}})};
            };
        } else if (e == "decoupling") {
            plan.run = [m, key, first, seed, &manifest](int workers, std::uint64_t trials) {
                const double r = manifest.r_list.front();
                std::vector<ResultRecord> records;
                if (manifest.has_z && manifest.has_w) {
                    DecouplingFactorization f = decoupling_factorization(
                        manifest.z, manifest.w, r, m, trials, seed, workers, first);
                    ordered_json params{{"m", m},
                                        {"r", r},
                                        {"z", vec3_json(manifest.z)},
                                        {"w", vec3_json(manifest.w)}};
                    auto add = [&](const char* name, double mean, double se) {
                        Estimate est{mean, se, f.raw.n, seed, name};
                        records.push_back(base_record(manifest, key, est, params));
                    };
                    add("decoupling_joint_ratio", f.joint_ratio, f.joint_ratio_se);
                    add("decoupling_a_squared", f.a_squared, f.a_squared_se);
                    add("decoupling_difference", f.difference, f.difference_se);
                } else {
                    DecouplingRatio ratio =
                        decoupling_ratio(r, m, trials, seed, workers, first);
                    records.push_back(base_record(
                        manifest, key, ratio.ratio,
                        ordered_json{{"m", m}, {"r", r}}));
                }
                return records;
            };
        } else if (e == "minkowski") {
            plan.run = [m, key, first, seed, &manifest](int workers, std::uint64_t trials) {
                const double beta = resolve_beta(manifest);
                MinkowskiOccupationReport report = minkowski_occupation_test(
                    manifest.boxes, m, manifest.s_list, beta, trials, seed, workers,
                    first);
                std::vector<ResultRecord> records;
                for (const MinkowskiCellStat& cell : report.cells) {
                    ordered_json params{
                        {"m", m},
                        {"s", cell.s},
                        {"box", {{"scale", cell.box.scale},
                                 {"index", cell.box.index}}},
                        {"beta", beta}};
                    std::ostringstream os;
                    os << "minkowski_ratio[s=" << cell.s << ",box=" << cell.box.index[0]
                       << ',' << cell.box.index[1] << ',' << cell.box.index[2] << "]";
                    Estimate est{cell.ratio, cell.ratio_se, report.trials, seed,
                                 os.str()};
                    records.push_back(base_record(manifest, key, est, params));
                }
                for (std::size_t si = 0; si < report.s_values.size(); ++si) {
                    ordered_json params{{"m", m}, {"s", report.s_values[si]}, {"beta", beta}};
                    std::ostringstream cv_name;
                    cv_name << "minkowski_cross_box_cv[s=" << report.s_values[si] << "]";
                    Estimate cv{report.cross_box_cv[si], 0.0, report.trials, seed,
                                cv_name.str()};
                    records.push_back(base_record(manifest, key, cv, params));
                    std::ostringstream c0_name;
                    c0_name << "minkowski_c0[s=" << report.s_values[si] << "]";
                    Estimate c0{report.c0[si], report.c0_se[si], report.trials, seed,
                                c0_name.str()};
                    records.push_back(base_record(manifest, key, c0, params));
                }
                return records;
            };
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

}  // namespace

void write_calibration_file(const std::filesystem::path& path,
                            const BetaCalibration& calibration) {
    if (!path.parent_path().empty())
        std::filesystem::create_directories(path.parent_path());
    ordered_json j{{"beta", calibration.beta},
                   {"ci_lo", calibration.ci_lo},
                   {"ci_hi", calibration.ci_hi},
                   {"manifest_hash", calibration.manifest_hash},
                   {"date", calibration.date},
                   {"code_version", calibration.code_version}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

BetaCalibration read_calibration_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open calibration file '" + path.string() +
                                    "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& err) {
        throw std::invalid_argument("malformed calibration file: " +
                                    std::string(err.what()));
    }
    BetaCalibration c;
    c.beta = j.at("beta").get<double>();
    c.ci_lo = j.value("ci_lo", 0.0);
    c.ci_hi = j.value("ci_hi", 0.0);
    c.manifest_hash = j.value("manifest_hash", std::string{});
    c.date = j.value("date", std::string{});
    c.code_version = j.value("code_version", std::string{});
    return c;
}

RunOutcome run_manifest(const ExperimentManifest& manifest,
                        const std::filesystem::path& out_dir, int workers_override,
                        std::optional<std::uint64_t> seed_override) {
    ExperimentManifest effective = manifest;
    if (seed_override) effective.seed = *seed_override;
    validate_manifest(effective);

    const int workers = workers_override > 0  ? workers_override
                        : effective.workers > 0 ? effective.workers
                                                 : default_workers();

    std::vector<CellPlan> plans = plan_cells(effective, effective.seed);

    // check every cell's preconditions before sampling anything
    for (const CellPlan& plan : plans) {
        try {
            plan.run(1, 0);
        } catch (const std::invalid_argument& err) {
            throw CellPreconditionError(plan.key, err.what());
        }
    }

    RunOutcome outcome;
    outcome.cells_total = plans.size();
    outcome.records_file = out_dir / "results.jsonl";
    outcome.summary_file = out_dir / "summary.csv";
    RecordStore store(outcome.records_file);

    const std::string manifest_hash = effective.hash();
    for (const CellPlan& plan : plans) {
        if (store.has_cell(manifest_hash, plan.key)) {
            ++outcome.cells_skipped;
            continue;
        }
        auto start = std::chrono::steady_clock::now();
        std::vector<ResultRecord> records = plan.run(workers, effective.trials);
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::string stamp = current_timestamp();
        for (ResultRecord& r : records) {
            r.wall_time_s = elapsed;
            r.timestamp = stamp;
        }
        store.append(records);
        for (ResultRecord& r : records) outcome.new_records.push_back(std::move(r));
        ++outcome.cells_run;
    }

    write_summary_csv(outcome.summary_file, store.load());
    return outcome;
}

}  // namespace lerw
