#pragma once

#include <optional>
#include <vector>

namespace orcs {

/// One-to-one matching between detected and ground-truth boundaries within a
/// +-tolerance window: candidate pairs are taken nearest-first (ties toward
/// the smaller truth index, then the smaller detected index), each boundary
/// matched at most once.
struct MatchedPair {
    int detected = 0;  // detected boundary value
    int truth = 0;     // matched ground-truth boundary value
    int distance = 0;  // |detected - truth| in samples

    MatchedPair(int d, int t, int dist) : detected(d), truth(t), distance(dist) {}
};

struct MatchReport {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    int tolerance = 0;
    std::vector<MatchedPair> matched_pairs;

    double precision() const {
        return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
    }
    double recall() const {
        return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
    }
};

MatchReport match_boundaries(const std::vector<int>& detected,
                             const std::vector<int>& truth, int tolerance);

/// Distance-to-ideal quality score on the precision/recall plane:
///   s1 = sqrt((1-r)^2 + (r/p - 1)^2),  s2 = (r - r/p) / sqrt(2),
///   R  = 1 - (|s1| + |s2|) / 2.
/// Exactly 1 at (p, r) = (1, 1); undefined (nullopt) when p = 0.
std::optional<double> r_measure(double precision, double recall);

/// Harmonic mean 2pr/(p+r); 0 when both are 0.
double f_measure(double precision, double recall);

/// Mean over ground-truth boundaries of the distance to the nearest detected
/// boundary. +inf if nothing was detected; 0 for an empty truth set.
double mean_boundary_error(const std::vector<int>& detected,
                           const std::vector<int>& truth);

}  // namespace orcs
