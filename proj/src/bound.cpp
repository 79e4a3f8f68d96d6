#include "orcs/bound.hpp"

#include <cmath>

#include "orcs/rng.hpp"
#include "orcs/split.hpp"

namespace orcs {

namespace {

void validate(const BoundParams& p) {
    if (p.n1 <= 0 || p.n1 >= p.n)
        throw std::invalid_argument("boundary must lie strictly inside [0, n]");
    if (p.delta_mu < 0.0)
        throw std::invalid_argument("mean gap must be >= 0");
    if (p.data_bound <= 0.0)
        throw std::invalid_argument("data range width must be > 0");
    if (p.delta <= 0.0)
        throw std::invalid_argument("failure probability must be > 0");
}

}  // namespace

double hoeffding_c(const BoundParams& p) {
    validate(p);
    const double n = p.n, n1 = p.n1;
    return 2.0 * p.delta_mu * p.delta_mu * n1 * n1 /
           (p.data_bound * p.data_bound * n * n);
}

BoundValues error_probability_bound(const BoundParams& p, int m) {
    validate(p);
    const int n2 = p.n - p.n1;
    if (m <= 0 || m >= n2)
        throw std::invalid_argument("offset must lie strictly inside (0, n2)");

    const double n = p.n, n1 = p.n1, md = m;
    const double b2 = p.data_bound * p.data_bound;
    const double gap2 = p.delta_mu * p.delta_mu;

    BoundValues out;
    out.log_simple = std::log(2.0) - hoeffding_c(p) * md;
    out.log_bound_minus = -2.0 * n1 * n1 * md * gap2 / (b2 * n * (n - md));
    const double reach = 2.0 * (n - n1) - md;
    const double denom = md * (n - md - 4.0 * n1) + 4.0 * n1 * (n - n1);
    out.log_bound_plus = -2.0 * n1 * n1 * reach * reach * gap2 / (b2 * n * denom);
    out.simple = std::exp(out.log_simple);
    out.bound_minus = std::exp(out.log_bound_minus);
    out.bound_plus = std::exp(out.log_bound_plus);
    return out;
}

double m0(const BoundParams& p) {
    validate(p);
    const double c = hoeffding_c(p);
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    return std::log(2.0 * (p.n - p.n1) / p.delta) / c;
}

SplitErrorCurve empirical_split_error(const SynthSpec& spec,
                                      const BoundParams& params,
                                      const Weights& w, int trials,
                                      std::uint64_t seed) {
    if (spec.segment_lengths.size() != 2)
        throw std::invalid_argument("error curve needs a two-segment spec");
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    const int n1 = spec.segment_lengths[0];
    const int n2 = spec.segment_lengths[1];
    const int n = n1 + n2;
    const Weights wn = w.size() == n - 1 ? w : w.rebuilt(n);

    SplitErrorCurve curve;
    curve.trials = trials;
    curve.m0_value = m0(params);
    curve.ms.resize(static_cast<size_t>(n2) - 1);
    curve.empirical_p.assign(static_cast<size_t>(n2) - 1, 0.0);
    for (int m = 1; m < n2; ++m) curve.ms[static_cast<size_t>(m) - 1] = m;

    int exceed = 0;
    for (int t = 0; t < trials; ++t) {
        SynthSpec trial = spec;
        trial.seed = Rng::for_stream(seed, static_cast<std::uint64_t>(t)).next_u64();
        const SynthResult data = generate(trial);
        const SplitResult scan = best_split(data.x, wn, true);
        const double g_true = scan.g_values[static_cast<size_t>(n1) - 1];
        for (int m = 1; m < n2; ++m)
            if (g_true < scan.g_values[static_cast<size_t>(n1 + m) - 1])
                curve.empirical_p[static_cast<size_t>(m) - 1] += 1.0;
        const int miss = scan.index - n1;
        if (miss >= curve.m0_value) ++exceed;
    }
    for (double& p : curve.empirical_p) p /= trials;
    curve.p_exceed_m0 = static_cast<double>(exceed) / trials;

    for (int m = 1; m < n2; ++m) {
        const BoundValues b = error_probability_bound(params, m);
        curve.bound_simple.push_back(b.simple);
        curve.bound_minus.push_back(b.bound_minus);
        curve.bound_plus.push_back(b.bound_plus);
    }
    return curve;
}

BoundParams bound_params_from(const SynthSpec& spec, double delta) {
    if (spec.segment_lengths.size() != 2 || spec.segment_means.rows() != 2)
        throw std::invalid_argument("bound parameters need a two-segment spec");
    if (spec.segment_means.cols() != 1)
        throw std::invalid_argument("bound parameters are univariate");

    BoundParams p;
    p.n1 = spec.segment_lengths[0];
    p.n = p.n1 + spec.segment_lengths[1];
    p.delta_mu = std::abs(spec.segment_means(1, 0) - spec.segment_means(0, 0));
    double extent = 0.0;
    if (spec.noise.kind == NoiseSpec::Kind::Uniform) extent = spec.noise.bound;
    if (spec.noise.kind == NoiseSpec::Kind::TruncatedGaussian)
        extent = spec.noise.clip;
    const double span = std::abs(spec.segment_means.maxCoeff() -
                                 spec.segment_means.minCoeff());
    p.data_bound = span + 2.0 * extent;
    p.delta = delta;
    return p;
}

}  // namespace orcs
