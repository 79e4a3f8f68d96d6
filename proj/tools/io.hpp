#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orcs/core.hpp"
#include "orcs/synth.hpp"

namespace orcs::cli {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kBoundaryConvention =
    "boundary b lies after sample b (1-based); equivalently b is the 0-based "
    "index of the first sample of the next segment; outlier indices are "
    "0-based";

/// Fixed-width float formatting ("%.17g"): round-trips doubles exactly and
/// keeps every emitted file byte-stable across runs and thread counts.
std::string fmt(double v);

/// FNV-1a 64-bit digest of a file's raw bytes, as "fnv1a64:<16 hex digits>".
std::string fnv1a64_file(const std::string& path);
std::string fnv1a64_bytes(const std::string& bytes);

/// One row per sample, comma-separated feature columns, optional header row.
Mat read_csv(const std::string& path, bool header);
void write_csv(const std::string& path, const Mat& m);

struct ResultDoc {
    std::vector<int> boundaries;  // 1-based "after sample" positions
    std::vector<int> outliers;    // 0-based sample indices
    double objective = 0.0;
    bool converged = true;
    int segments = 1;
};
void write_result_json(const std::string& path, const ResultDoc& doc);

void write_truth_json(const std::string& path,
                      const std::vector<int>& boundaries,
                      const std::vector<int>& outliers);

/// Reads "boundaries" from a truth file or a result document.
std::vector<int> read_boundaries_json(const std::string& path);

SynthSpec read_synth_spec(const std::string& path);

/// Reproducibility sidecar written next to every output as
/// <output>.manifest.json. Wall time lives only here so the primary outputs
/// stay byte-identical across runs.
struct Manifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> config;
    std::string input_digest = "none";
    std::optional<std::uint64_t> seed;
    double wall_ms = 0.0;
};
void write_manifest(const std::string& output_path, const Manifest& m);

}  // namespace orcs::cli
