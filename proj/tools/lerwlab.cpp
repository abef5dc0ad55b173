// lerwlab: Monte Carlo laboratory for loop-erased random walks on the
// 3D lattice.  Subcommands: run, report, calibrate-beta, dump-path.
//
// Exit codes: 0 ok, 2 bad manifest/analysis spec, 3 estimator
// precondition violated (the offending cell is named), 4 missing records
// for a report, 5 calibration outside the admissible exponent interval.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lerw/analysis.hpp"
#include "lerw/fit.hpp"
#include "lerw/loop_erasure.hpp"
#include "lerw/manifest.hpp"
#include "lerw/path_io.hpp"
#include "lerw/records.hpp"
#include "lerw/runner.hpp"
#include "lerw/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitManifest = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitMissingData = 4;
constexpr int kExitCalibrationBound = 5;

constexpr double kBetaLower = 1.0;
constexpr double kBetaUpper = 5.0 / 3.0;

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value ? value : fallback;
}

int env_workers() {
    const char* value = std::getenv("LERWLAB_WORKERS");
    return value ? std::atoi(value) : 0;
}

fs::path resolve_out(const std::string& flag_value, const std::string& manifest_value) {
    if (!flag_value.empty()) return flag_value;
    std::string env = env_or("LERWLAB_OUT", "");
    if (!env.empty()) return env;
    return manifest_value;
}

/// Key-value analysis spec for `report`, same line format as manifests.
struct AnalysisSpec {
    int schema = 1;
    std::string kind;  // power_law | funceq
    std::string name = "report";
    std::string estimator;
    std::string axis = "m";
    std::vector<double> m_list;
    std::vector<double> n_list;
    std::vector<double> r_grid;
    double fixed_m = 0.0;
    std::string expect;  // "beta-2" | "beta-3" | "3-beta" | literal number
    std::string calibration;
    std::string out_dir = "reports";
};

AnalysisSpec parse_analysis_spec(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw lerw::ManifestError(0, "", "cannot open analysis spec '" + path.string() + "'");
    AnalysisSpec spec;
    std::string line;
    int line_no = 0;
    auto fail = [&line_no](const std::string& field, const std::string& msg) {
        throw lerw::ManifestError(line_no, field, msg);
    };
    while (std::getline(in, line)) {
        ++line_no;
        auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos) fail("", "expected key = value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t");
            auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        key = trim(key);
        value = trim(value);
        auto numbers = [&](std::vector<double>& target) {
            std::string item;
            for (char c : value + " ") {
                if (c == ' ' || c == '\t' || c == ',') {
                    if (!item.empty()) target.push_back(std::stod(item));
                    item.clear();
                } else {
                    item.push_back(c);
                }
            }
        };
        if (key == "schema") spec.schema = std::stoi(value);
        else if (key == "kind") spec.kind = value;
        else if (key == "name") spec.name = value;
        else if (key == "estimator") spec.estimator = value;
        else if (key == "axis") spec.axis = value;
        else if (key == "m") numbers(spec.m_list);
        else if (key == "n") numbers(spec.n_list);
        else if (key == "r") numbers(spec.r_grid);
        else if (key == "fixed_m") spec.fixed_m = std::stod(value);
        else if (key == "expect") spec.expect = value;
        else if (key == "calibration") spec.calibration = value;
        else if (key == "out") spec.out_dir = value;
        else fail(key, "unknown key '" + key + "'");
    }
    if (spec.kind != "power_law" && spec.kind != "funceq")
        fail("kind", "kind must be power_law or funceq");
    return spec;
}

std::optional<double> expected_exponent(const AnalysisSpec& spec) {
    if (spec.expect.empty()) return std::nullopt;
    if (spec.expect == "beta-2" || spec.expect == "beta-3" || spec.expect == "3-beta") {
        lerw::BetaCalibration calibration = lerw::read_calibration_file(spec.calibration);
        if (spec.expect == "beta-2") return calibration.beta - 2.0;
        if (spec.expect == "beta-3") return calibration.beta - 3.0;
        return 3.0 - calibration.beta;
    }
    return std::stod(spec.expect);
}

int cmd_run(const std::string& manifest_path, const std::string& out_flag,
            int workers_flag, std::optional<std::uint64_t> seed_override) {
    lerw::ExperimentManifest manifest = lerw::parse_manifest_file(manifest_path);
    fs::path out = resolve_out(out_flag, manifest.out_dir);
    int workers = workers_flag > 0 ? workers_flag : env_workers();
    lerw::RunOutcome outcome =
        lerw::run_manifest(manifest, out, workers, seed_override);
    std::cout << "cells: " << outcome.cells_total << " total, " << outcome.cells_run
              << " run, " << outcome.cells_skipped << " resumed\n"
              << "records: " << outcome.new_records.size() << " appended to "
              << outcome.records_file.string() << '\n'
              << "summary: " << outcome.summary_file.string() << '\n';
    return kExitOk;
}

int cmd_report(const std::string& results_dir, const std::string& spec_path,
               const std::string& out_flag) {
    AnalysisSpec spec = parse_analysis_spec(spec_path);
    fs::path out_dir = out_flag.empty() ? fs::path(spec.out_dir) : fs::path(out_flag);

    lerw::RecordStore store(fs::path(results_dir) / "results.jsonl");
    std::vector<lerw::ResultRecord> records = store.load();

    auto match_m = [](const lerw::ResultRecord& r, double m) {
        return r.params.contains("m") &&
               std::abs(r.params["m"].get<double>() - m) <= 1e-9 * std::max(1.0, m);
    };

    std::vector<lerw::ScalePoint> points;
    std::vector<std::string> missing;

    if (spec.kind == "power_law") {
        const bool radial = spec.axis == "r";
        const std::vector<double>& axis_values = radial ? spec.r_grid : spec.m_list;
        for (double v : axis_values) {
            const lerw::ResultRecord* found = nullptr;
            for (const lerw::ResultRecord& r : records) {
                if (r.estimator != spec.estimator) continue;
                if (radial) {
                    if (!match_m(r, spec.fixed_m)) continue;
                    if (!r.params.contains("r") ||
                        std::abs(r.params["r"].get<double>() - v) > 1e-12)
                        continue;
                } else {
                    if (!match_m(r, v)) continue;
                    if (r.estimator == "ball_hit") continue;  // needs axis = r
                }
                found = &r;
                break;
            }
            if (!found) {
                std::ostringstream os;
                os << spec.estimator << (radial ? ";r=" : ";m=") << v;
                missing.push_back(os.str());
                continue;
            }
            points.push_back({v, lerw::Estimate{found->mean, found->stderr_of_mean,
                                                found->n_trials, found->seed,
                                                found->descriptor}});
        }
        if (!missing.empty()) {
            std::cerr << "missing records for cells:\n";
            for (const std::string& cell : missing) std::cerr << "  " << cell << '\n';
            return kExitMissingData;
        }
        lerw::PowerLawFit fit = lerw::fit_power_law(points);

        fs::create_directories(out_dir);
        ordered_json report{{"name", spec.name},
                            {"kind", "power_law"},
                            {"estimator", spec.estimator},
                            {"axis", spec.axis},
                            {"exponent", fit.exponent},
                            {"exponent_ci", {fit.exponent_ci_lo, fit.exponent_ci_hi}},
                            {"exponent_se", fit.exponent_se},
                            {"amplitude", fit.amplitude},
                            {"chi_squared", fit.chi_squared},
                            {"n_points", fit.n_points},
                            {"code_version", lerw::kCodeVersion}};
        if (auto expect = expected_exponent(spec)) {
            report["expected_exponent"] = *expect;
            report["ci_covers_expected"] = fit.ci_contains(*expect);
        }
        std::ofstream json_out(out_dir / (spec.name + "_report.json"));
        json_out << report.dump(2) << '\n';

        std::ofstream csv(out_dir / (spec.name + "_fit.csv"));
        csv << "scale,mean,stderr,fitted\n";
        for (const lerw::ScalePoint& p : points) {
            double fitted = fit.amplitude * std::pow(p.scale, fit.exponent);
            csv << std::setprecision(17) << p.scale << ',' << p.estimate.mean << ','
                << p.estimate.stderr_of_mean << ',' << fitted << '\n';
        }
        std::cout << "exponent " << fit.exponent << "  ci [" << fit.exponent_ci_lo
                  << ", " << fit.exponent_ci_hi << "]\n";
        return kExitOk;
    }

    // funceq: needs one_point records at every scale 2^t
    std::vector<double> n_list(spec.n_list.begin(), spec.n_list.end());
    std::vector<double> r_grid(spec.r_grid.begin(), spec.r_grid.end());
    std::map<double, lerw::Estimate> z;
    for (double t : lerw::funceq_scales(n_list, r_grid)) {
        double mesh = std::exp2(t);
        const lerw::ResultRecord* found = nullptr;
        for (const lerw::ResultRecord& r : records)
            if (r.estimator == "one_point" && match_m(r, mesh)) {
                found = &r;
                break;
            }
        if (!found) {
            std::ostringstream os;
            os << "one_point;m=" << mesh;
            missing.push_back(os.str());
            continue;
        }
        z.emplace(t, lerw::Estimate{found->mean, found->stderr_of_mean,
                                    found->n_trials, found->seed, found->descriptor});
    }
    if (!missing.empty()) {
        std::cerr << "missing records for cells:\n";
        for (const std::string& cell : missing) std::cerr << "  " << cell << '\n';
        return kExitMissingData;
    }
    lerw::RatioTestReport report = lerw::funceq_from_estimates(n_list, r_grid, z);

    fs::create_directories(out_dir);
    ordered_json entries = ordered_json::array();
    for (const lerw::FuncEqEntry& e : report.entries)
        entries.push_back(ordered_json{{"n", e.n},
                                       {"r", e.r},
                                       {"s", e.s},
                                       {"ratio", e.ratio},
                                       {"ci", {e.ci_lo, e.ci_hi}}});
    ordered_json j{{"name", spec.name},
                   {"kind", "funceq"},
                   {"pass", report.pass},
                   {"entries", entries},
                   {"code_version", lerw::kCodeVersion}};
    std::ofstream json_out(out_dir / (spec.name + "_report.json"));
    json_out << j.dump(2) << '\n';
    std::ofstream csv(out_dir / (spec.name + "_ratios.csv"));
    csv << "n,r,s,ratio,ci_lo,ci_hi\n";
    for (const lerw::FuncEqEntry& e : report.entries)
        csv << e.n << ',' << e.r << ',' << e.s << ',' << std::setprecision(17)
            << e.ratio << ',' << e.ci_lo << ',' << e.ci_hi << '\n';
    std::cout << (report.pass ? "funceq: all ratio intervals cover 1\n"
                              : "funceq: some ratio interval misses 1\n");
    return kExitOk;
}

int cmd_calibrate(const std::string& manifest_path, const std::string& out_flag,
                  int workers_flag, std::optional<std::uint64_t> seed_override,
                  const std::string& calibration_flag) {
    lerw::ExperimentManifest manifest = lerw::parse_manifest_file(manifest_path);
    if (manifest.estimator != "length")
        throw lerw::ManifestError(0, "estimator",
                                  "calibrate-beta expects a length manifest");
    if (manifest.m_list.size() < 4)
        throw lerw::ManifestError(0, "m", "calibration needs at least four scales");

    fs::path out = resolve_out(out_flag, manifest.out_dir);
    int workers = workers_flag > 0 ? workers_flag : env_workers();
    lerw::run_manifest(manifest, out, workers, seed_override);

    // fit from the records so reruns and resumes are free
    lerw::ExperimentManifest effective = manifest;
    if (seed_override) effective.seed = *seed_override;
    lerw::RecordStore store(out / "results.jsonl");
    std::vector<lerw::ResultRecord> stored = store.load();
    std::vector<lerw::ScalePoint> points;
    for (double m : effective.m_list) {
        for (const lerw::ResultRecord& r : stored) {
            if (r.manifest_hash != effective.hash()) continue;
            if (!r.params.contains("m") ||
                std::abs(r.params["m"].get<double>() - m) > 1e-9 * m)
                continue;
            points.push_back({m, lerw::Estimate{r.mean, r.stderr_of_mean, r.n_trials,
                                                r.seed, r.descriptor}});
            break;
        }
    }
    lerw::PowerLawFit fit = lerw::fit_power_law(points, effective.seed ^ 0xca11bULL);

    std::cout << "beta " << fit.exponent << "  ci [" << fit.exponent_ci_lo << ", "
              << fit.exponent_ci_hi << "]\n";
    if (!(fit.exponent > kBetaLower && fit.exponent <= kBetaUpper)) {
        std::cerr << "calibration violates paper bound: beta " << fit.exponent
                  << " outside (1, 5/3]\n";
        return kExitCalibrationBound;
    }
    if (fit.exponent_ci_lo <= kBetaLower || fit.exponent_ci_hi > kBetaUpper)
        std::cerr << "warning: confidence interval [" << fit.exponent_ci_lo << ", "
                  << fit.exponent_ci_hi << "] pokes outside (1, 5/3]\n";

    lerw::BetaCalibration calibration;
    calibration.beta = fit.exponent;
    calibration.ci_lo = fit.exponent_ci_lo;
    calibration.ci_hi = fit.exponent_ci_hi;
    calibration.manifest_hash = effective.hash();
    calibration.date = lerw::current_timestamp();
    calibration.code_version = lerw::kCodeVersion;
    fs::path calibration_path = calibration_flag.empty()
                                    ? out / "calibration.json"
                                    : fs::path(calibration_flag);
    lerw::write_calibration_file(calibration_path, calibration);
    std::cout << "calibration written to " << calibration_path.string() << '\n';
    return kExitOk;
}

int cmd_dump_path(const std::string& kind, double mesh, double truncation,
                  std::uint64_t seed, std::uint64_t trial, const std::string& out,
                  bool decode) {
    if (decode) {
        lerw::PathDump dump = lerw::read_path_file(out);
        std::cout << "mesh," << dump.path.mesh << ",loop_erased," << dump.loop_erased
                  << '\n';
        std::cout << "x,y,z\n";
        for (const lerw::LatticePoint& p : dump.path.points)
            std::cout << p.x << ',' << p.y << ',' << p.z << '\n';
        return kExitOk;
    }
    lerw::SeedSpec spec{seed, trial};
    if (kind == "srw") {
        lerw::TrialRng rng(spec);
        lerw::LatticePath path =
            lerw::srw_until_exit(lerw::BallDomain{mesh, {}}, {0, 0, 0}, rng);
        lerw::write_path_file(out, path, false);
    } else if (kind == "lerw") {
        lerw::SelfAvoidingPath curve =
            lerw::lerw_sample(lerw::BallDomain{mesh, {}}, spec);
        lerw::write_path_file(out, lerw::LatticePath{curve.points, curve.mesh}, true);
    } else if (kind == "ilerw") {
        lerw::SelfAvoidingPath curve = lerw::ilerw_sample(mesh, truncation, spec);
        lerw::write_path_file(out, lerw::LatticePath{curve.points, curve.mesh}, true);
    } else {
        throw lerw::ManifestError(0, "kind", "kind must be srw, lerw, or ilerw");
    }
    std::cout << "path written to " << out << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for 3D loop-erased random walks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", lerw::kCodeVersion);

    std::string manifest_path, out_flag, spec_path, results_dir, calibration_flag;
    int workers = 0;
    std::uint64_t seed_override_value = 0;

    auto* run = app.add_subcommand("run", "execute an experiment manifest");
    run->add_option("--manifest,-m", manifest_path, "manifest file")->required();
    run->add_option("--out,-o", out_flag, "output directory (overrides manifest)");
    run->add_option("--workers,-j", workers, "worker threads");
    auto* seed_opt = run->add_option("--seed-override", seed_override_value,
                                     "replace the manifest seed");

    auto* report = app.add_subcommand("report", "fit and summarize stored records");
    report->add_option("--results", results_dir, "results directory")->required();
    report->add_option("--spec", spec_path, "analysis spec file")->required();
    report->add_option("--out,-o", out_flag, "report output directory");

    auto* calibrate =
        app.add_subcommand("calibrate-beta", "fit the growth exponent and store it");
    calibrate->add_option("--manifest,-m", manifest_path, "length manifest")->required();
    calibrate->add_option("--out,-o", out_flag, "output directory");
    calibrate->add_option("--workers,-j", workers, "worker threads");
    auto* cal_seed = calibrate->add_option("--seed-override", seed_override_value,
                                           "replace the manifest seed");
    calibrate->add_option("--calibration", calibration_flag,
                          "calibration file destination");

    std::string kind = "lerw", dump_out = "path.bin";
    double mesh = 64.0, truncation = 8.0;
    std::uint64_t seed = 1, trial = 0;
    bool decode = false;
    auto* dump = app.add_subcommand("dump-path", "write or decode a binary path");
    dump->add_option("--kind", kind, "srw | lerw | ilerw");
    dump->add_option("--mesh", mesh, "mesh scale m");
    dump->add_option("--truncation", truncation, "ilerw truncation factor");
    dump->add_option("--seed", seed, "experiment seed");
    dump->add_option("--trial", trial, "trial index");
    dump->add_option("--out,-o", dump_out, "path file");
    dump->add_flag("--decode", decode, "decode the file to CSV instead");

    CLI11_PARSE(app, argc, argv);
    std::optional<std::uint64_t> seed_override;
    if (seed_opt->count() > 0 || cal_seed->count() > 0)
        seed_override = seed_override_value;

    try {
        if (*run) return cmd_run(manifest_path, out_flag, workers, seed_override);
        if (*report) return cmd_report(results_dir, spec_path, out_flag);
        if (*calibrate)
            return cmd_calibrate(manifest_path, out_flag, workers, seed_override,
                                 calibration_flag);
        if (*dump)
            return cmd_dump_path(kind, mesh, truncation, seed, trial, dump_out, decode);
    } catch (const lerw::ManifestError& err) {
        std::cerr << "manifest error";
        if (err.line() > 0) std::cerr << " (line " << err.line() << ")";
        if (!err.field().empty()) std::cerr << " [" << err.field() << "]";
        std::cerr << ": " << err.what() << '\n';
        return kExitManifest;
    } catch (const lerw::CellPreconditionError& err) {
        std::cerr << "precondition failed in cell " << err.cell() << ": " << err.what()
                  << '\n';
        return kExitPrecondition;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return kExitOk;
}
