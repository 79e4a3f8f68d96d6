#pragma once

#include "orcs/core.hpp"

namespace orcs {

/// Result of a single-boundary scan. index is the split position i* in
/// [1, n-1]: samples with 0-based index < i* form the first part, so i* is
/// simultaneously the 1-based "after sample i*" boundary and the 0-based
/// start of the second part. For best_split, lambda_star is the scan maximum
/// g(i*); for l0_best_split it carries the minimal two-segment SSE.
struct SplitResult {
    int index = 0;
    double lambda_star = 0.0;
    std::vector<double> g_values;  // filled only on request
};

/// Largest fusion strength at which a boundary appears, and where:
///   g(i) = i(n-i) / (w_i * n) * || mean(x[i:]) - mean(x[:i]) ||_2
/// maximized over i in [1, n-1]; ties resolved toward the smallest i.
/// Runs in O(nd) using running sums. Requires n >= 2.
SplitResult best_split(const Sequence& x, const Weights& w,
                       bool keep_g = false);

/// Same scan over a matrix block with explicit boundary weights
/// (w must have x.rows() - 1 entries).
SplitResult best_split_block(const Eigen::Ref<const Mat>& x, const Vec& w,
                             bool keep_g = false);

/// Exhaustive two-segment least-squares split: minimizes
/// sse(x[:i]) + sse(x[i:]) over i in [1, n-1], ties toward the smallest i.
/// lambda_star carries the minimal SSE. Requires n >= 2.
SplitResult l0_best_split(const Sequence& x);

}  // namespace orcs
