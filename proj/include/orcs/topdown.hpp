#pragma once

#include "orcs/core.hpp"

namespace orcs {

/// Detection threshold for a fixed outlier budget: ranks the residual norms
/// ||x_i - mu_i|| in decreasing order (ties toward the smaller index),
/// returns the indices of the top `budget` samples and a gamma strictly
/// between the budget-th and (budget+1)-th ranked norms (midpoint), so that
/// prox_l2 at gamma flags exactly those samples. If the two ranked norms are
/// equal the interval is empty and gamma equals both: fewer than `budget`
/// samples then pass the strict ||residual|| > gamma test. budget = 0 yields
/// gamma = +inf and no indices. Requires 0 <= budget < x.size().
struct RobustGamma {
    double gamma = 0.0;
    std::vector<int> indices;  // ranked, size = budget
};

RobustGamma robust_gamma(const Sequence& x_seg, const Mat& mu, int budget);

struct SplitRecord {
    int segment_start = 0;   // start of the segment that was split
    int boundary = 0;        // new boundary (0-based start of the right part)
    double sse_decrease = 0; // decrease of total raw-data SSE, >= 0
};

struct TdOptions {
    /// Centroid used for residuals inside the per-segment alternation: the
    /// running segment mean (default), or the two candidate-children means.
    bool per_child_centroid = false;
    int inner_max_iter = 50;
    double inner_tol = 1e-9;  // relative stability required of the offsets
};

struct TopDownResult {
    Segmentation segmentation;
    OutlierAssignment outliers;
    std::vector<SplitRecord> split_history;
    std::vector<int> per_segment_budgets;  // final budgets, sums to M
    bool converged = true;                 // false if any inner loop hit its cap
};

/// Greedy top-down segmentation into K segments with a global outlier budget
/// M. Each round evaluates, per segment, an alternation of {single-boundary
/// scan on x - z, budgeted detection against the segment centroid, offset
/// update with the full residual so detected samples are scanned as if they
/// sat at the centroid}; the segment whose materialized split decreases raw
/// SSE the most is split (ties toward the leftmost), and its budget is
/// divided between the
/// children by detected counts (remainder redistributed proportionally to
/// child length). Candidate evaluations are cached across rounds; only the
/// two children of the last split are re-evaluated. After the K-th segment
/// the outlier offsets are refreshed per final segment at fixed boundaries.
/// The weight scheme of w is re-instantiated at each segment's length.
/// Requires 1 <= K <= n and 0 <= M < n.
TopDownResult td_orcs(const Sequence& x, int K, int M, const Weights& w,
                      const TdOptions& opts = {});

/// Classic greedy merge baseline: start from n singleton segments and merge
/// the adjacent pair whose union increases total SSE the least (ties toward
/// the leftmost pair) until K segments remain. O(n (log n) d) via a lazy
/// heap over prefix statistics. Requires 1 <= K <= n.
Segmentation bottom_up(const Sequence& x, int K);

}  // namespace orcs
