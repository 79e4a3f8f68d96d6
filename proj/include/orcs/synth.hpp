#pragma once

#include <cstdint>

#include "orcs/core.hpp"

namespace orcs {

struct NoiseSpec {
    enum class Kind { None, Uniform, TruncatedGaussian };
    Kind kind = Kind::None;
    double bound = 0.0;  // Uniform: per-coordinate noise in [-bound, bound]
    double sigma = 0.0;  // TruncatedGaussian: std dev ...
    double clip = 0.0;   // ... clipped to [-clip, clip] per coordinate
};

struct OutlierSpec {
    enum class Kind { None, Spike, Replace };
    Kind kind = Kind::None;
    int count = 0;
    double amplitude = 0.0;  // Spike: norm of the added offset
    double spread = 0.0;     // Replace: per-coordinate uniform in [-spread, spread]
};

/// Piecewise-constant ground truth plus optional noise and contamination.
/// Fully determined by (spec, seed): the same spec always generates the same
/// data, on any platform.
struct SynthSpec {
    Mat segment_means;               // K x d
    std::vector<int> segment_lengths;  // K entries, all >= 1
    NoiseSpec noise;
    OutlierSpec outliers;
    std::uint64_t seed = 0;
};

struct SynthResult {
    Sequence x;
    Segmentation truth;              // clean segment means as centroids
    std::vector<int> true_outliers;  // 0-based contaminated indices, sorted
};

SynthResult generate(const SynthSpec& spec);

/// Convenience: K segments of equal length `len`, means on a staggered grid
/// with adjacent-segment jumps of norm jump (direction varied per boundary).
SynthSpec staircase_spec(int K, int len, int d, double jump,
                         std::uint64_t seed);

}  // namespace orcs
