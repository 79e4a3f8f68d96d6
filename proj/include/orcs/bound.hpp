#pragma once

#include <cstdint>
#include <vector>

#include "orcs/core.hpp"
#include "orcs/synth.hpp"

namespace orcs {

// Finite-sample analysis of the single-boundary scan on bounded data: two
// segments of lengths n1 and n2 = n - n1, mean gap delta_mu, samples confined
// to an interval of width data_bound (|x_i| <= data_bound / 2). The scan
// misses the true boundary by m samples with probability at most
//
//     P(g(0) < g(m)) <= 2 exp(-C m),   C = 2 delta_mu^2 n1^2 / (data_bound^2 n^2)
//
// together with two refinements (bound_minus / bound_plus below). Setting
// m0 = log(2 n2 / delta) / C gives P(miss >= m0) <= delta.

struct BoundParams {
    int n = 0;
    int n1 = 0;              // true boundary position, 0 < n1 < n
    double delta_mu = 0.0;   // gap between segment means, >= 0
    double data_bound = 0.0; // width of the data range, > 0
    double delta = 0.05;     // target failure probability, > 0
};

struct BoundValues {
    double simple = 0.0;        // 2 exp(-C m)
    double bound_minus = 0.0;   // exp(-2 n1^2 m delta_mu^2 / (B^2 n (n-m)))
    double bound_plus = 0.0;    // sharper variant, < bound_minus on (0, n2)
    // log-domain values for comparisons that would underflow
    double log_simple = 0.0;
    double log_bound_minus = 0.0;
    double log_bound_plus = 0.0;
};

/// Hoeffding rate C for the parameters above.
double hoeffding_c(const BoundParams& p);

/// All three bounds at offset m; requires 0 < m < n - n1.
BoundValues error_probability_bound(const BoundParams& p, int m);

/// Offset guaranteed to be exceeded with probability at most delta:
/// m0 = log(2 (n - n1) / delta) / C. Returns +inf when C = 0 (no gap).
double m0(const BoundParams& p);

/// Monte Carlo error curve for the scan on two-segment data. Per trial,
/// generates x from `spec` (which must describe exactly two segments),
/// computes the scan statistic g at every offset, and records
///   - p_offset[m-1] = empirical P(g(n1) < g(n1 + m)) for m = 1..n2-1,
///   - the signed miss m* = i* - n1 of the arg-max.
/// Analytic columns are filled from `params`.
struct SplitErrorCurve {
    std::vector<int> ms;              // 1..n2-1
    std::vector<double> empirical_p;  // P(g(0) < g(m))
    std::vector<double> bound_simple;
    std::vector<double> bound_minus;
    std::vector<double> bound_plus;
    double m0_value = 0.0;
    double p_exceed_m0 = 0.0;  // empirical P(m* >= m0)
    int trials = 0;
};

SplitErrorCurve empirical_split_error(const SynthSpec& spec,
                                      const BoundParams& params,
                                      const Weights& w, int trials,
                                      std::uint64_t seed);

/// BoundParams implied by a univariate two-segment SynthSpec: delta_mu from
/// the mean gap, data_bound from the mean levels plus the noise extent.
BoundParams bound_params_from(const SynthSpec& spec, double delta);

}  // namespace orcs
