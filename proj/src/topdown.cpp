#include "orcs/topdown.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <tuple>

#include "orcs/split.hpp"

namespace orcs {

namespace {

// Indices sorted by decreasing norm, ties toward the smaller index.
std::vector<int> rank_desc(const std::vector<double>& norms) {
    std::vector<int> order(norms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (norms[a] != norms[b]) return norms[a] > norms[b];
        return a < b;
    });
    return order;
}

struct InnerEval {
    bool can_split = false;
    int boundary = -1;          // absolute start of the right child
    double sse_decrease = 0.0;  // raw-data SSE drop at that boundary
    std::map<int, Vec> z;       // absolute index -> nonzero offset
    bool converged = true;
};

// Per-segment alternation: single-boundary scan on the offset-corrected
// block, budgeted detection of the largest raw residuals against the segment
// centroid, then offset refresh with the full residual so detected samples
// sit exactly at the centroid during the next scan. Partial absorption is
// not enough: a large spike inflates the centroid, and a sample left at
// twice the centroid norm can still steer the scan toward itself.
InnerEval eval_segment(const Mat& x, int seg_start, int seg_end,
                       const PrefixStats& stats, int budget,
                       const Weights& scheme, const TdOptions& opts,
                       bool with_split) {
    const int len = seg_end - seg_start;
    const int d = static_cast<int>(x.cols());
    const Mat block = x.middleRows(seg_start, len);
    budget = std::max(0, std::min(budget, len - 1));

    InnerEval eval;
    const bool scan = with_split && len >= 2;
    Vec w_local;
    if (scan) w_local = scheme.rebuilt(len).values();

    Mat z = Mat::Zero(len, d);
    int boundary_loc = scan ? 1 : -1;
    std::vector<int> support_prev;
    bool stable = budget == 0;

    for (int iter = 0; iter < opts.inner_max_iter && !stable; ++iter) {
        const Mat clean = block - z;
        if (scan) boundary_loc = best_split_block(clean, w_local).index;

        Eigen::RowVectorXd c_left, c_right;
        int left_count = len;
        if (opts.per_child_centroid && scan) {
            left_count = boundary_loc;
            c_left = clean.topRows(left_count).colwise().mean();
            c_right = clean.bottomRows(len - left_count).colwise().mean();
        } else {
            c_left = clean.colwise().mean();
        }
        auto center_row = [&](int i) -> const Eigen::RowVectorXd& {
            return i < left_count ? c_left : c_right;
        };

        std::vector<double> norms(static_cast<size_t>(len));
        for (int i = 0; i < len; ++i)
            norms[static_cast<size_t>(i)] = (block.row(i) - center_row(i)).norm();
        const std::vector<int> order = rank_desc(norms);

        Mat z_new = Mat::Zero(len, d);
        std::vector<int> support;
        for (int k = 0; k < budget; ++k) {
            const int i = order[static_cast<size_t>(k)];
            const Vec off = (block.row(i) - center_row(i)).transpose();
            if (off.norm() > 0.0) {
                z_new.row(i) = off.transpose();
                support.push_back(i);
            }
        }
        std::sort(support.begin(), support.end());

        double scale = 1.0;
        for (double v : norms) scale = std::max(scale, v);
        const double delta = (z_new - z).rowwise().norm().maxCoeff();
        if (support == support_prev && delta <= opts.inner_tol * scale)
            stable = true;
        z = std::move(z_new);
        support_prev = std::move(support);
    }

    if (scan) {
        const SplitResult split = best_split_block(block - z, w_local);
        eval.can_split = true;
        eval.boundary = seg_start + split.index;
        const double before = stats.sse(seg_start, seg_end);
        const double after = stats.sse(seg_start, eval.boundary) +
                             stats.sse(eval.boundary, seg_end);
        eval.sse_decrease = std::max(0.0, before - after);
    }
    for (int i = 0; i < len; ++i)
        if (z.row(i).norm() > 0.0)
            eval.z[seg_start + i] = z.row(i).transpose();
    eval.converged = stable;
    return eval;
}

}  // namespace

RobustGamma robust_gamma(const Sequence& x_seg, const Mat& mu, int budget) {
    const int len = x_seg.size();
    if (mu.rows() != len || mu.cols() != x_seg.dim())
        throw std::invalid_argument("mean matrix shape mismatch");
    if (budget < 0 || budget >= len)
        throw std::invalid_argument("detection budget must lie in [0, n)");

    RobustGamma out;
    if (budget == 0) {
        out.gamma = std::numeric_limits<double>::infinity();
        return out;
    }
    std::vector<double> norms(static_cast<size_t>(len));
    for (int i = 0; i < len; ++i)
        norms[static_cast<size_t>(i)] = (x_seg.mat().row(i) - mu.row(i)).norm();
    const std::vector<int> order = rank_desc(norms);
    out.gamma = 0.5 * (norms[static_cast<size_t>(order[budget - 1])] +
                       norms[static_cast<size_t>(order[budget])]);
    out.indices.assign(order.begin(), order.begin() + budget);
    return out;
}

TopDownResult td_orcs(const Sequence& x, int K, int M, const Weights& w,
                      const TdOptions& opts) {
    const int n = x.size();
    const int d = x.dim();
    if (K < 1 || K > n)
        throw std::invalid_argument("segment count must lie in [1, n]");
    if (M < 0 || M >= n)
        throw std::invalid_argument("outlier budget must lie in [0, n)");

    PrefixStats stats(x);
    std::map<int, int> seg_end{{0, n}};
    std::map<int, int> budget{{0, M}};
    std::map<int, InnerEval> cache;
    TopDownResult out;
    bool all_converged = true;

    auto evaluate = [&](int s) {
        InnerEval e = eval_segment(x.mat(), s, seg_end[s], stats, budget[s], w,
                                   opts, true);
        all_converged = all_converged && e.converged;
        cache[s] = std::move(e);
    };
    evaluate(0);

    for (int round = 1; round < K; ++round) {
        int pick = -1;
        double best = -1.0;
        for (const auto& [s, e] : cache)
            if (e.can_split && e.sse_decrease > best) {
                best = e.sse_decrease;
                pick = s;
            }
        // n >= K guarantees a splittable segment at every round
        const InnerEval ev = cache[pick];
        const int b = ev.boundary;
        const int pick_end = seg_end[pick];
        out.split_history.push_back({pick, b, ev.sse_decrease});

        // Children inherit the absorbed counts; the unused remainder is
        // spread proportionally to child length, clamped to len - 1 with
        // overflow handed to the sibling.
        int m_left = 0;
        for (const auto& [i, zi] : ev.z)
            if (i < b) ++m_left;
        const int m_right = static_cast<int>(ev.z.size()) - m_left;
        const int total = budget[pick];
        const int len_left = b - pick, len_right = pick_end - b;
        const int deficit = total - m_left - m_right;
        int b_left =
            m_left + static_cast<int>(std::llround(
                         static_cast<double>(deficit) * len_left /
                         (len_left + len_right)));
        int b_right = total - b_left;
        const int cap_left = len_left - 1, cap_right = len_right - 1;
        if (b_left > cap_left) {
            b_right += b_left - cap_left;
            b_left = cap_left;
        }
        if (b_right > cap_right) {
            b_left += b_right - cap_right;
            b_right = cap_right;
        }
        if (b_left > cap_left) b_left = cap_left;  // both saturated: drop rest

        seg_end[pick] = b;
        seg_end[b] = pick_end;
        budget[pick] = b_left;
        budget[b] = b_right;
        cache.erase(pick);
        evaluate(pick);
        evaluate(b);
    }

    // Final offsets per segment at the fixed boundaries.
    Mat z_dense = Mat::Zero(n, d);
    for (const auto& [s, m] : budget) {
        out.per_segment_budgets.push_back(m);
        if (m <= 0) continue;
        InnerEval fin = eval_segment(x.mat(), s, seg_end[s], stats, m, w, opts,
                                     false);
        all_converged = all_converged && fin.converged;
        for (const auto& [i, zi] : fin.z) {
            out.outliers.set(i, zi);
            z_dense.row(i) = zi.transpose();
        }
    }

    Segmentation seg;
    for (const auto& [s, e] : seg_end) seg.starts.push_back(s);
    const Mat clean = x.mat() - z_dense;
    for (const auto& [s, e] : seg_end)
        seg.centroids.push_back(
            clean.middleRows(s, e - s).colwise().mean().transpose());
    out.segmentation = std::move(seg);
    out.converged = all_converged;
    return out;
}

Segmentation bottom_up(const Sequence& x, int K) {
    const int n = x.size();
    if (K < 1 || K > n)
        throw std::invalid_argument("segment count must lie in [1, n]");
    PrefixStats stats(x);

    std::vector<int> next(static_cast<size_t>(n)), prev(static_cast<size_t>(n)),
        end(static_cast<size_t>(n)), version(static_cast<size_t>(n), 0);
    std::vector<char> alive(static_cast<size_t>(n), 1);
    for (int i = 0; i < n; ++i) {
        next[static_cast<size_t>(i)] = i + 1;
        prev[static_cast<size_t>(i)] = i - 1;
        end[static_cast<size_t>(i)] = i + 1;
    }

    // (merge cost, left start, left version, right version); lazily
    // invalidated through the version counters.
    using Entry = std::tuple<double, int, int, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    auto push_pair = [&](int a) {
        const int b = next[static_cast<size_t>(a)];
        if (b >= n) return;
        const double cost = stats.sse(a, end[static_cast<size_t>(b)]) -
                            stats.sse(a, end[static_cast<size_t>(a)]) -
                            stats.sse(b, end[static_cast<size_t>(b)]);
        heap.emplace(cost, a, version[static_cast<size_t>(a)],
                     version[static_cast<size_t>(b)]);
    };
    for (int i = 0; i + 1 < n; ++i) push_pair(i);

    int count = n;
    while (count > K) {
        const auto [cost, a, va, vb] = heap.top();
        heap.pop();
        const int b = next[static_cast<size_t>(a)];
        if (!alive[static_cast<size_t>(a)] || b >= n ||
            version[static_cast<size_t>(a)] != va ||
            !alive[static_cast<size_t>(b)] ||
            version[static_cast<size_t>(b)] != vb)
            continue;
        end[static_cast<size_t>(a)] = end[static_cast<size_t>(b)];
        alive[static_cast<size_t>(b)] = 0;
        ++version[static_cast<size_t>(a)];
        next[static_cast<size_t>(a)] = next[static_cast<size_t>(b)];
        if (next[static_cast<size_t>(b)] < n)
            prev[static_cast<size_t>(next[static_cast<size_t>(b)])] = a;
        --count;
        if (prev[static_cast<size_t>(a)] >= 0)
            push_pair(prev[static_cast<size_t>(a)]);
        push_pair(a);
    }

    Segmentation seg;
    for (int i = 0; i < n; ++i) {
        if (!alive[static_cast<size_t>(i)]) continue;
        seg.starts.push_back(i);
        seg.centroids.push_back(stats.mean(i, end[static_cast<size_t>(i)]));
    }
    return seg;
}

}  // namespace orcs
