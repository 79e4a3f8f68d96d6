#include "orcs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <tuple>

namespace orcs {

MatchReport match_boundaries(const std::vector<int>& detected,
                             const std::vector<int>& truth, int tolerance) {
    if (tolerance < 0) tolerance = 0;

    // (distance, truth position, detected position), scanned nearest-first.
    std::vector<std::tuple<int, int, int>> candidates;
    for (size_t t = 0; t < truth.size(); ++t) {
        for (size_t d = 0; d < detected.size(); ++d) {
            const int dist = std::abs(detected[d] - truth[t]);
            if (dist <= tolerance)
                candidates.emplace_back(dist, static_cast<int>(t),
                                        static_cast<int>(d));
        }
    }
    std::sort(candidates.begin(), candidates.end());

    std::vector<bool> truth_used(truth.size(), false);
    std::vector<bool> det_used(detected.size(), false);
    MatchReport report;
    report.tolerance = tolerance;
    for (const auto& [dist, t, d] : candidates) {
        if (truth_used[static_cast<size_t>(t)] || det_used[static_cast<size_t>(d)])
            continue;
        truth_used[static_cast<size_t>(t)] = true;
        det_used[static_cast<size_t>(d)] = true;
        ++report.tp;
        report.matched_pairs.emplace_back(detected[static_cast<size_t>(d)],
                                          truth[static_cast<size_t>(t)], dist);
    }
    report.fp = static_cast<int>(detected.size()) - report.tp;
    report.fn = static_cast<int>(truth.size()) - report.tp;
    return report;
}

std::optional<double> r_measure(double precision, double recall) {
    if (precision <= 0.0) return std::nullopt;
    const double ratio = recall / precision;
    const double s1 = std::sqrt((1.0 - recall) * (1.0 - recall) +
                                (ratio - 1.0) * (ratio - 1.0));
    const double s2 = (recall - ratio) / std::sqrt(2.0);
    return 1.0 - 0.5 * (std::abs(s1) + std::abs(s2));
}

double f_measure(double precision, double recall) {
    if (precision + recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double mean_boundary_error(const std::vector<int>& detected,
                           const std::vector<int>& truth) {
    if (truth.empty()) return 0.0;
    if (detected.empty()) return std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (int t : truth) {
        int nearest = std::numeric_limits<int>::max();
        for (int d : detected) nearest = std::min(nearest, std::abs(d - t));
        total += nearest;
    }
    return total / static_cast<double>(truth.size());
}

}  // namespace orcs
