#include "orcs/split.hpp"

#include <cmath>

namespace orcs {

SplitResult best_split_block(const Eigen::Ref<const Mat>& x, const Vec& w,
                             bool keep_g) {
    const int n = static_cast<int>(x.rows());
    if (n < 2) throw std::invalid_argument("split scan needs n >= 2");
    if (w.size() != n - 1)
        throw std::invalid_argument("need one weight per interior boundary");

    const Vec total = x.colwise().sum().transpose();
    Vec left = Vec::Zero(x.cols());

    SplitResult best;
    best.lambda_star = -1.0;
    if (keep_g) best.g_values.reserve(static_cast<size_t>(n) - 1);

    for (int i = 1; i < n; ++i) {
        left += x.row(i - 1).transpose();
        const Vec mean_gap = (total - left) / (n - i) - left / i;
        const double g =
            static_cast<double>(i) * (n - i) / (w[i - 1] * n) * mean_gap.norm();
        if (keep_g) best.g_values.push_back(g);
        if (g > best.lambda_star) {
            best.lambda_star = g;
            best.index = i;
        }
    }
    return best;
}

SplitResult best_split(const Sequence& x, const Weights& w, bool keep_g) {
    const Vec& wv = w.size() == x.size() - 1 ? w.values()
                                             : w.rebuilt(x.size()).values();
    return best_split_block(x.mat(), wv, keep_g);
}

SplitResult l0_best_split(const Sequence& x) {
    const int n = x.size();
    if (n < 2) throw std::invalid_argument("split scan needs n >= 2");
    PrefixStats stats(x);

    SplitResult best;
    best.lambda_star = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) {
        const double sse = stats.sse(0, i) + stats.sse(i, n);
        if (sse < best.lambda_star) {
            best.lambda_star = sse;
            best.index = i;
        }
    }
    return best;
}

}  // namespace orcs
