#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace orcs::cli {

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::string int_list(const std::vector<int>& v) {
    std::string out = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

}  // namespace

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fnv1a64_bytes(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

std::string fnv1a64_file(const std::string& path) {
    return fnv1a64_bytes(slurp(path));
}

Mat read_csv(const std::string& path, bool header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first && header) {
            first = false;
            continue;
        }
        first = false;
        if (line.find_first_not_of(" \t,") == std::string::npos) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            size_t used = 0;
            double v;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": not a number: '" + cell + "'");
            }
            while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                ++used;
            if (used != cell.size())
                throw std::runtime_error(path + ": trailing junk in '" + cell + "'");
            row.push_back(v);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error(path + ": ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");
    Mat m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return m;
}

void write_csv(const std::string& path, const Mat& m) {
    std::string out;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out += ",";
            out += fmt(m(i, j));
        }
        out += "\n";
    }
    spill(path, out);
}

void write_result_json(const std::string& path, const ResultDoc& doc) {
    std::string out = "{\n";
    out += "  \"boundaries\": " + int_list(doc.boundaries) + ",\n";
    out += "  \"outliers\": " + int_list(doc.outliers) + ",\n";
    out += "  \"objective\": " + (std::isfinite(doc.objective)
                                      ? fmt(doc.objective)
                                      : std::string("null")) + ",\n";
    out += std::string("  \"converged\": ") +
           (doc.converged ? "true" : "false") + ",\n";
    out += "  \"segments\": " + std::to_string(doc.segments) + ",\n";
    out += "  \"convention\": \"" + json_escape(kBoundaryConvention) + "\"\n";
    out += "}\n";
    spill(path, out);
}

void write_truth_json(const std::string& path,
                      const std::vector<int>& boundaries,
                      const std::vector<int>& outliers) {
    std::string out = "{\n";
    out += "  \"boundaries\": " + int_list(boundaries) + ",\n";
    out += "  \"outliers\": " + int_list(outliers) + ",\n";
    out += "  \"convention\": \"" + json_escape(kBoundaryConvention) + "\"\n";
    out += "}\n";
    spill(path, out);
}

std::vector<int> read_boundaries_json(const std::string& path) {
    const auto doc = nlohmann::json::parse(slurp(path));
    if (!doc.contains("boundaries") || !doc["boundaries"].is_array())
        throw std::runtime_error(path + ": missing \"boundaries\" array");
    std::vector<int> out;
    for (const auto& b : doc["boundaries"]) out.push_back(b.get<int>());
    return out;
}

SynthSpec read_synth_spec(const std::string& path) {
    const auto doc = nlohmann::json::parse(slurp(path));
    SynthSpec spec;

    const auto& means = doc.at("segment_means");
    const int k = static_cast<int>(means.size());
    if (k < 1) throw std::runtime_error(path + ": segment_means is empty");
    const int d = static_cast<int>(means.at(0).size());
    spec.segment_means.resize(k, d);
    for (int s = 0; s < k; ++s)
        for (int j = 0; j < d; ++j)
            spec.segment_means(s, j) =
                means.at(static_cast<size_t>(s)).at(static_cast<size_t>(j)).get<double>();
    for (const auto& len : doc.at("segment_lengths"))
        spec.segment_lengths.push_back(len.get<int>());

    if (doc.contains("noise")) {
        const auto& nz = doc["noise"];
        const std::string kind = nz.value("kind", "none");
        if (kind == "uniform") {
            spec.noise.kind = NoiseSpec::Kind::Uniform;
            spec.noise.bound = nz.at("bound").get<double>();
        } else if (kind == "tgauss") {
            spec.noise.kind = NoiseSpec::Kind::TruncatedGaussian;
            spec.noise.sigma = nz.at("sigma").get<double>();
            spec.noise.clip = nz.at("clip").get<double>();
        } else if (kind != "none") {
            throw std::runtime_error(path + ": unknown noise kind " + kind);
        }
    }
    if (doc.contains("outliers")) {
        const auto& ol = doc["outliers"];
        const std::string kind = ol.value("kind", "none");
        if (kind == "spike") {
            spec.outliers.kind = OutlierSpec::Kind::Spike;
            spec.outliers.count = ol.at("count").get<int>();
            spec.outliers.amplitude = ol.at("amplitude").get<double>();
        } else if (kind == "replace") {
            spec.outliers.kind = OutlierSpec::Kind::Replace;
            spec.outliers.count = ol.at("count").get<int>();
            spec.outliers.spread = ol.at("spread").get<double>();
        } else if (kind != "none") {
            throw std::runtime_error(path + ": unknown outlier kind " + kind);
        }
    }
    spec.seed = doc.value("seed", 0ULL);
    return spec;
}

void write_manifest(const std::string& output_path, const Manifest& m) {
    std::string out = "{\n";
    out += "  \"command\": \"" + json_escape(m.command) + "\",\n";
    out += "  \"config\": {";
    for (size_t i = 0; i < m.config.size(); ++i) {
        if (i) out += ", ";
        out += "\"" + json_escape(m.config[i].first) + "\": \"" +
               json_escape(m.config[i].second) + "\"";
    }
    out += "},\n";
    out += "  \"input_digest\": \"" + json_escape(m.input_digest) + "\",\n";
    out += "  \"seed\": " +
           (m.seed ? std::to_string(*m.seed) : std::string("null")) + ",\n";
    out += std::string("  \"tool_version\": \"") + kToolVersion + "\",\n";
    char wall[40];
    std::snprintf(wall, sizeof wall, "%.3f", m.wall_ms);
    out += std::string("  \"wall_time_ms\": ") + wall + "\n";
    out += "}\n";
    spill(output_path + ".manifest.json", out);
}

}  // namespace orcs::cli
