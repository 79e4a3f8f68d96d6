#include "orcs/core.hpp"

#include <algorithm>
#include <cmath>

namespace orcs {

Sequence::Sequence(Mat samples) : data_(std::move(samples)) {
    if (data_.rows() < 1 || data_.cols() < 1)
        throw std::invalid_argument("sequence must be non-empty");
    if (!data_.allFinite())
        throw std::invalid_argument("sequence entries must be finite");
}

Sequence Sequence::from_1d(const std::vector<double>& values) {
    Mat m(static_cast<int>(values.size()), 1);
    for (int i = 0; i < m.rows(); ++i) m(i, 0) = values[static_cast<size_t>(i)];
    return Sequence(std::move(m));
}

namespace {

Vec build_weights(Weights::Kind kind, double alpha, int n) {
    if (n < 1) throw std::invalid_argument("weights need n >= 1");
    Vec w(std::max(n - 1, 0));
    for (int j = 0; j < n - 1; ++j) {
        const double i = j + 1.0;  // 1-based boundary position
        switch (kind) {
            case Weights::Kind::Uniform:
                w[j] = 1.0;
                break;
            case Weights::Kind::Sqrt:
                w[j] = std::sqrt(i * (n - i) / n);
                break;
            case Weights::Kind::Power:
                w[j] = std::pow(i * (n - i), alpha);
                break;
        }
    }
    return w;
}

}  // namespace

Weights Weights::uniform(int n) {
    return Weights(Kind::Uniform, 0.0, build_weights(Kind::Uniform, 0.0, n));
}

Weights Weights::sqrt_scheme(int n) {
    return Weights(Kind::Sqrt, 0.5, build_weights(Kind::Sqrt, 0.5, n));
}

Weights Weights::power(int n, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw std::invalid_argument("power weight exponent must lie in [0, 1]");
    return Weights(Kind::Power, alpha, build_weights(Kind::Power, alpha, n));
}

Weights Weights::rebuilt(int n) const {
    return Weights(kind_, alpha_, build_weights(kind_, alpha_, n));
}

int Segmentation::segment_of(int i) const {
    auto it = std::upper_bound(starts.begin(), starts.end(), i);
    if (it == starts.begin()) throw std::out_of_range("index before first segment");
    return static_cast<int>(std::distance(starts.begin(), it)) - 1;
}

std::vector<int> Segmentation::boundaries() const {
    return std::vector<int>(starts.begin() + 1, starts.end());
}

void Segmentation::validate(int n, int d) const {
    if (starts.empty() || starts.front() != 0)
        throw std::invalid_argument("segmentation must start at 0");
    for (size_t s = 1; s < starts.size(); ++s)
        if (starts[s] <= starts[s - 1])
            throw std::invalid_argument("segment starts must be strictly increasing");
    if (starts.back() >= n)
        throw std::invalid_argument("segment start beyond sequence end");
    if (centroids.size() != starts.size())
        throw std::invalid_argument("one centroid per segment required");
    for (const Vec& c : centroids)
        if (c.size() != d)
            throw std::invalid_argument("centroid dimension mismatch");
}

void OutlierAssignment::set(int index, Vec z) {
    if (z.size() == 0 || z.isZero(0.0)) {
        entries_.erase(index);
    } else {
        entries_[index] = std::move(z);
    }
}

std::vector<int> OutlierAssignment::indices() const {
    std::vector<int> out;
    out.reserve(entries_.size());
    for (const auto& [i, z] : entries_) out.push_back(i);
    return out;
}

double OutlierAssignment::norm_sum(int q) const {
    double total = 0.0;
    for (const auto& [i, z] : entries_)
        total += q == 1 ? z.lpNorm<1>() : z.norm();
    return total;
}

Mat OutlierAssignment::to_dense(int n, int d) const {
    Mat z = Mat::Zero(n, d);
    for (const auto& [i, zi] : entries_) {
        if (i < 0 || i >= n || zi.size() != d)
            throw std::invalid_argument("offset entry out of range");
        z.row(i) = zi.transpose();
    }
    return z;
}

PrefixStats::PrefixStats(const Sequence& x) : n_(x.size()), d_(x.dim()) {
    prefix_.resize(n_ + 1, d_);
    prefix_.row(0).setZero();
    sq_.assign(static_cast<size_t>(n_) + 1, 0.0L);
    for (int i = 0; i < n_; ++i) {
        prefix_.row(i + 1) =
            prefix_.row(i) + x.mat().row(i).cast<long double>();
        long double row_sq = 0.0L;
        for (int j = 0; j < d_; ++j) {
            const long double v = static_cast<long double>(x.mat()(i, j));
            row_sq += v * v;
        }
        sq_[static_cast<size_t>(i) + 1] = sq_[static_cast<size_t>(i)] + row_sq;
    }
}

void PrefixStats::check_range(int a, int b) const {
    if (a < 0 || b > n_ || a >= b)
        throw std::out_of_range("segment range must satisfy 0 <= a < b <= n");
}

double PrefixStats::sse(int a, int b) const {
    check_range(a, b);
    const long double m = b - a;
    long double sum_sq = sq_[static_cast<size_t>(b)] - sq_[static_cast<size_t>(a)];
    long double mean_sq = 0.0L;
    for (int j = 0; j < d_; ++j) {
        const long double s = prefix_(b, j) - prefix_(a, j);
        mean_sq += s * s;
    }
    const long double out = sum_sq - mean_sq / m;
    return out > 0.0L ? static_cast<double>(out) : 0.0;
}

Vec PrefixStats::mean(int a, int b) const {
    return sum(a, b) / (b - a);
}

Vec PrefixStats::sum(int a, int b) const {
    check_range(a, b);
    Vec s(d_);
    for (int j = 0; j < d_; ++j)
        s[j] = static_cast<double>(prefix_(b, j) - prefix_(a, j));
    return s;
}

double segment_sse(const Sequence& x, int a, int b) {
    return PrefixStats(x).sse(a, b);
}

double data_scale(const Mat& x) {
    const Eigen::RowVectorXd mean = x.colwise().mean();
    double best = 0.0;
    for (int i = 0; i < x.rows(); ++i)
        best = std::max(best, (x.row(i) - mean).norm());
    return best;
}

double objective(const Sequence& x, const Segmentation& seg,
                 const OutlierAssignment& z, const SolverConfig& cfg) {
    seg.validate(x.size(), x.dim());
    if (cfg.q != 1 && cfg.q != 2)
        throw std::invalid_argument("offset norm must be 1 or 2");
    const Weights w = cfg.weights.size() == x.size() - 1
                          ? cfg.weights
                          : cfg.weights.rebuilt(x.size());

    double fit = 0.0;
    for (int i = 0; i < x.size(); ++i) {
        Vec r = x.mat().row(i).transpose() - seg.centroids[static_cast<size_t>(seg.segment_of(i))];
        auto it = z.entries().find(i);
        if (it != z.entries().end()) r -= it->second;
        fit += r.squaredNorm();
    }

    double fuse = 0.0;
    for (size_t s = 1; s < seg.starts.size(); ++s) {
        const int b = seg.starts[s];  // boundary between samples b-1 and b
        fuse += w.values()[b - 1] * (seg.centroids[s] - seg.centroids[s - 1]).norm();
    }

    double offset = 0.0;
    if (z.count() > 0) {
        if (std::isinf(cfg.gamma))
            throw std::invalid_argument(
                "infinite offset cost admits no nonzero offsets");
        offset = cfg.gamma * z.norm_sum(cfg.q);
    }

    return 0.5 * fit + cfg.lambda * fuse + offset;
}

}  // namespace orcs
