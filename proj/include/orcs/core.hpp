#pragma once

#include <Eigen/Dense>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace orcs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A multivariate sequence: one row per sample, one column per feature.
/// All entries must be finite; the sequence owns its storage.
class Sequence {
public:
    explicit Sequence(Mat samples);

    /// Convenience for univariate data.
    static Sequence from_1d(const std::vector<double>& values);

    int size() const { return static_cast<int>(data_.rows()); }
    int dim() const { return static_cast<int>(data_.cols()); }
    const Mat& mat() const { return data_; }

private:
    Mat data_;
};

/// Boundary weights w_1..w_{n-1}; values()[j] weighs the difference between
/// samples j and j+1 (0-based). Three schemes:
///   uniform     w = 1
///   sqrt        w_i = sqrt(i(n-i)/n)        (i the 1-based boundary position)
///   power(a)    w_i = (i(n-i))^a, a in [0,1]
class Weights {
public:
    enum class Kind { Uniform, Sqrt, Power };

    static Weights uniform(int n);
    static Weights sqrt_scheme(int n);
    static Weights power(int n, double alpha);

    /// Rebuild the same scheme for a sequence of a different length.
    Weights rebuilt(int n) const;

    Kind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    const Vec& values() const { return values_; }
    int size() const { return static_cast<int>(values_.size()); }

private:
    Weights(Kind kind, double alpha, Vec values)
        : kind_(kind), alpha_(alpha), values_(std::move(values)) {}

    Kind kind_;
    double alpha_;
    Vec values_;
};

/// A partition of [0, n) into contiguous segments. starts is strictly
/// increasing and begins with 0; centroids[s] is the representative mean of
/// segment s. boundaries() lists starts[1..]: boundary b sits between samples
/// b-1 and b (0-based), i.e. "after sample b" in 1-based terms.
struct Segmentation {
    std::vector<int> starts;
    std::vector<Vec> centroids;

    int segments() const { return static_cast<int>(starts.size()); }
    int segment_of(int i) const;
    std::vector<int> boundaries() const;
    /// Throws std::invalid_argument unless the partition is valid for (n, d).
    void validate(int n, int d) const;
};

/// Sparse per-sample offsets; only samples with a nonzero offset are stored.
/// A stored sample is an outlier: the solver criterion is exactly ||z_i|| > 0.
class OutlierAssignment {
public:
    void set(int index, Vec z);
    bool contains(int index) const { return entries_.count(index) > 0; }
    const std::map<int, Vec>& entries() const { return entries_; }
    std::vector<int> indices() const;
    int count() const { return static_cast<int>(entries_.size()); }
    /// Sum of ||z_i||_q over stored entries (q in {1,2}).
    double norm_sum(int q) const;
    Mat to_dense(int n, int d) const;

private:
    std::map<int, Vec> entries_;
};

struct SolverConfig {
    double lambda = 1.0;                 // fusion strength, >= 0
    double gamma = std::numeric_limits<double>::infinity();  // offset cost, may be +inf
    int q = 2;                           // offset norm: 1 or 2
    Weights weights = Weights::uniform(2);
    double tol = 1e-8;                   // relative-change / duality-gap tolerance
    int max_iter = 10000;                // inner solver iteration cap
    int alt_max_iter = 500;              // outer alternation cap
};

/// Prefix statistics over a sequence; accumulated in extended precision so
/// that segment SSE queries stay accurate on long sequences.
class PrefixStats {
public:
    explicit PrefixStats(const Sequence& x);

    int size() const { return n_; }
    int dim() const { return d_; }

    /// Sum of squared distances to the mean over samples [a, b), O(d).
    double sse(int a, int b) const;
    Vec mean(int a, int b) const;
    Vec sum(int a, int b) const;

private:
    void check_range(int a, int b) const;

    int n_ = 0, d_ = 0;
    // prefix_[i] = sum of rows [0, i); sq_[i] = sum of squared norms [0, i)
    Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic> prefix_;
    std::vector<long double> sq_;
};

/// Convenience wrapper: SSE of x over [a, b).
double segment_sse(const Sequence& x, int a, int b);

/// Scale used for jump detection and residual tolerances:
/// max_i ||x_i - mean(x)||_2.
double data_scale(const Mat& x);

/// Penalized segmentation objective
///   1/2 sum_i ||x_i - z_i - mu_i||^2
///   + lambda * sum_i w_i ||mu_{i+1} - mu_i||_2
///   + gamma * sum_i ||z_i||_q
/// with mu_i the centroid of the segment containing i. A gamma of +inf is
/// admissible when every z_i is zero (the penalty term is then zero).
double objective(const Sequence& x, const Segmentation& seg,
                 const OutlierAssignment& z, const SolverConfig& cfg);

}  // namespace orcs
