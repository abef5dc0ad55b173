#include "lerw/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace lerw {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string current;
    for (char c : value) {
        if (c == ' ' || c == '\t' || c == ',') {
            if (!current.empty()) items.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) items.push_back(current);
    return items;
}

double parse_double(const std::string& value, int line, const std::string& field) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ManifestError(line, field, "expected a number, got '" + value + "'");
    }
}

std::uint64_t parse_u64(const std::string& value, int line, const std::string& field) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ManifestError(line, field, "expected an unsigned integer, got '" + value + "'");
    }
}

Vec3 parse_vec3(const std::string& value, int line, const std::string& field) {
    auto parts = split_list(value);
    if (parts.size() != 3)
        throw ManifestError(line, field, "expected three comma-separated coordinates");
    return {parse_double(parts[0], line, field), parse_double(parts[1], line, field),
            parse_double(parts[2], line, field)};
}

DyadicBox parse_box(const std::string& value, int line, const std::string& field) {
    // "scale:kx,ky,kz"
    auto colon = value.find(':');
    if (colon == std::string::npos)
        throw ManifestError(line, field, "expected box as scale:kx,ky,kz");
    int scale = static_cast<int>(parse_double(value.substr(0, colon), line, field));
    auto parts = split_list(value.substr(colon + 1));
    if (parts.size() != 3)
        throw ManifestError(line, field, "expected box as scale:kx,ky,kz");
    DyadicBox box;
    box.scale = scale;
    for (int i = 0; i < 3; ++i)
        box.index[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(
            std::llround(parse_double(parts[static_cast<std::size_t>(i)], line, field)));
    return box;
}

const std::set<std::string> kKnownEstimators = {
    "length",    "one_point",  "ilerw_one_point", "ball_hit",
    "two_point", "es",         "decoupling",      "minkowski"};

std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

ExperimentManifest parse_manifest(std::istream& in) {
    ExperimentManifest m;
    std::string line;
    std::string section;
    int line_no = 0;
    bool saw_schema = false;

    while (std::getline(in, line)) {
        ++line_no;
        auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ManifestError(line_no, "", "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "grid")
                throw ManifestError(line_no, section, "unknown section '" + section + "'");
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ManifestError(line_no, "", "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ManifestError(line_no, "", "empty key");

        if (section.empty()) {
            if (key == "schema") {
                m.schema = static_cast<int>(parse_u64(value, line_no, key));
                if (m.schema != 1)
                    throw ManifestError(line_no, key, "unsupported schema version");
                saw_schema = true;
            } else if (key == "name") {
                m.name = value;
            } else if (key == "estimator") {
                m.estimator = value;
            } else if (key == "seed") {
                m.seed = parse_u64(value, line_no, key);
            } else if (key == "trials") {
                m.trials = parse_u64(value, line_no, key);
            } else if (key == "workers") {
                m.workers = static_cast<int>(parse_u64(value, line_no, key));
            } else if (key == "out") {
                m.out_dir = value;
            } else {
                throw ManifestError(line_no, key, "unknown key '" + key + "'");
            }
        } else {  // [grid]
            if (key == "m") {
                for (const auto& item : split_list(value))
                    m.m_list.push_back(parse_double(item, line_no, key));
            } else if (key == "x") {
                m.x = parse_vec3(value, line_no, key);
            } else if (key == "z") {
                m.z = parse_vec3(value, line_no, key);
                m.has_z = true;
            } else if (key == "w") {
                m.w = parse_vec3(value, line_no, key);
                m.has_w = true;
            } else if (key == "r") {
                for (const auto& item : split_list(value))
                    m.r_list.push_back(parse_double(item, line_no, key));
            } else if (key == "r2") {
                m.r2 = parse_double(value, line_no, key);
            } else if (key == "mode") {
                if (value != "points" && value != "balls")
                    throw ManifestError(line_no, key, "mode must be points or balls");
                m.mode = value;
            } else if (key == "K") {
                m.truncation = parse_double(value, line_no, key);
            } else if (key == "s") {
                for (const auto& item : split_list(value))
                    m.s_list.push_back(parse_double(item, line_no, key));
            } else if (key == "boxes") {
                for (const auto& item : split_list(value))
                    m.boxes.push_back(parse_box(item, line_no, key));
            } else if (key == "beta") {
                m.beta = parse_double(value, line_no, key);
            } else if (key == "calibration") {
                m.calibration_path = value;
            } else {
                throw ManifestError(line_no, key, "unknown grid key '" + key + "'");
            }
        }
    }
    if (!saw_schema) throw ManifestError(0, "schema", "missing schema version");
    if (m.estimator.empty()) throw ManifestError(0, "estimator", "missing estimator");
    return m;
}

ExperimentManifest parse_manifest_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError(0, "", "cannot open manifest '" + path + "'");
    return parse_manifest(in);
}

std::string ExperimentManifest::canonical_text() const {
    std::ostringstream os;
    os << "schema=" << schema << '\n';
    os << "name=" << name << '\n';
    os << "estimator=" << estimator << '\n';
    os << "seed=" << seed << '\n';
    os << "trials=" << trials << '\n';
    os << "m=";
    for (double v : m_list) os << format_double(v) << ' ';
    os << '\n';
    os << "x=" << format_double(x.x) << ',' << format_double(x.y) << ','
       << format_double(x.z) << '\n';
    if (has_z)
        os << "z=" << format_double(z.x) << ',' << format_double(z.y) << ','
           << format_double(z.z) << '\n';
    if (has_w)
        os << "w=" << format_double(w.x) << ',' << format_double(w.y) << ','
           << format_double(w.z) << '\n';
    os << "r=";
    for (double v : r_list) os << format_double(v) << ' ';
    os << '\n';
    os << "r2=" << format_double(r2) << '\n';
    os << "mode=" << mode << '\n';
    os << "K=" << format_double(truncation) << '\n';
    os << "s=";
    for (double v : s_list) os << format_double(v) << ' ';
    os << '\n';
    os << "boxes=";
    for (const DyadicBox& b : boxes)
        os << b.scale << ':' << b.index[0] << ',' << b.index[1] << ',' << b.index[2]
           << ' ';
    os << '\n';
    if (beta) os << "beta=" << format_double(*beta) << '\n';
    return os.str();
}

std::string ExperimentManifest::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::vector<std::string> manifest_cell_keys(const ExperimentManifest& manifest) {
    std::vector<std::string> keys;
    const std::string& e = manifest.estimator;
    if (e == "es" || e == "decoupling" || e == "minkowski" || e == "ball_hit" ||
        e == "length" || e == "one_point" || e == "ilerw_one_point" ||
        e == "two_point") {
        // one cell per mesh scale; profile-style estimators fan records
        // out per component inside the cell
        for (double m : manifest.m_list) {
            std::ostringstream os;
            os << e << ";m=" << format_double(m);
            keys.push_back(os.str());
        }
    }
    return keys;
}

void validate_manifest(const ExperimentManifest& manifest) {
    if (!kKnownEstimators.count(manifest.estimator))
        throw ManifestError(0, "estimator",
                            "unknown estimator '" + manifest.estimator + "'");
    // an empty m list is a valid (empty) grid
    for (double m : manifest.m_list)
        if (!(m > 0.0)) throw ManifestError(0, "m", "mesh scales must be positive");

    const std::string& e = manifest.estimator;
    if (e == "ball_hit" && manifest.r_list.empty())
        throw ManifestError(0, "r", "ball_hit needs radii");
    if (e == "two_point" && !(manifest.has_z && manifest.has_w))
        throw ManifestError(0, "z", "two_point needs z and w");
    if (e == "decoupling" && manifest.r_list.empty())
        throw ManifestError(0, "r", "decoupling needs a shape radius");
    if (e == "minkowski") {
        if (manifest.boxes.empty()) throw ManifestError(0, "boxes", "minkowski needs boxes");
        if (manifest.s_list.empty()) throw ManifestError(0, "s", "minkowski needs s values");
        if (!manifest.beta && manifest.calibration_path.empty())
            throw ManifestError(0, "beta", "minkowski needs beta or a calibration file");
    }
    if (e == "es")
        for (double m : manifest.m_list)
            if (m < 1.0 || m != std::floor(m))
                throw ManifestError(0, "m", "es radii must be integers >= 1");
}

}  // namespace lerw
