#include "orcs/synth.hpp"

#include <algorithm>
#include <cmath>

#include "orcs/rng.hpp"

namespace orcs {

namespace {

// Independent draw streams so that e.g. contamination positions do not
// depend on how many noise values were drawn.
enum Stream : std::uint64_t { kNoise = 0, kPositions = 1, kValues = 2 };

}  // namespace

SynthResult generate(const SynthSpec& spec) {
    const int k = static_cast<int>(spec.segment_means.rows());
    const int d = static_cast<int>(spec.segment_means.cols());
    if (k < 1 || d < 1)
        throw std::invalid_argument("need at least one segment mean");
    if (static_cast<int>(spec.segment_lengths.size()) != k)
        throw std::invalid_argument("one length per segment required");
    int n = 0;
    for (int len : spec.segment_lengths) {
        if (len < 1) throw std::invalid_argument("segment lengths must be >= 1");
        n += len;
    }
    if (spec.outliers.kind != OutlierSpec::Kind::None &&
        (spec.outliers.count < 0 || spec.outliers.count >= n))
        throw std::invalid_argument("contamination count must lie in [0, n)");

    Mat data(n, d);
    Segmentation truth;
    int at = 0;
    for (int s = 0; s < k; ++s) {
        truth.starts.push_back(at);
        truth.centroids.push_back(spec.segment_means.row(s).transpose());
        for (int i = 0; i < spec.segment_lengths[static_cast<size_t>(s)]; ++i)
            data.row(at++) = spec.segment_means.row(s);
    }

    if (spec.noise.kind != NoiseSpec::Kind::None) {
        Rng rng = Rng::for_stream(spec.seed, kNoise);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j) {
                if (spec.noise.kind == NoiseSpec::Kind::Uniform)
                    data(i, j) += rng.uniform(-spec.noise.bound, spec.noise.bound);
                else
                    data(i, j) +=
                        rng.truncated_normal(spec.noise.sigma, spec.noise.clip);
            }
    }

    std::vector<int> contaminated;
    if (spec.outliers.kind != OutlierSpec::Kind::None &&
        spec.outliers.count > 0) {
        Rng pos = Rng::for_stream(spec.seed, kPositions);
        std::vector<int> pool(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i;
        for (int i = 0; i < spec.outliers.count; ++i)
            std::swap(pool[static_cast<size_t>(i)],
                      pool[static_cast<size_t>(pos.uniform_int(i, n - 1))]);
        contaminated.assign(pool.begin(), pool.begin() + spec.outliers.count);
        std::sort(contaminated.begin(), contaminated.end());

        Rng val = Rng::for_stream(spec.seed, kValues);
        for (int i : contaminated) {
            if (spec.outliers.kind == OutlierSpec::Kind::Spike) {
                Vec dir(d);
                double norm = 0.0;
                while (norm == 0.0) {
                    for (int j = 0; j < d; ++j) dir[j] = val.normal();
                    norm = dir.norm();
                }
                data.row(i) +=
                    (spec.outliers.amplitude / norm) * dir.transpose();
            } else {
                for (int j = 0; j < d; ++j)
                    data(i, j) = val.uniform(-spec.outliers.spread,
                                             spec.outliers.spread);
            }
        }
    }

    return SynthResult{Sequence(std::move(data)), std::move(truth),
                       std::move(contaminated)};
}

SynthSpec staircase_spec(int K, int len, int d, double jump,
                         std::uint64_t seed) {
    if (K < 1 || len < 1 || d < 1)
        throw std::invalid_argument("staircase needs K, len, d >= 1");
    SynthSpec spec;
    spec.segment_means = Mat::Zero(K, d);
    for (int s = 1; s < K; ++s) {
        const int axis = (s - 1) % d;
        const double sign = ((s - 1) / d) % 2 == 0 ? 1.0 : -1.0;
        spec.segment_means.row(s) = spec.segment_means.row(s - 1);
        spec.segment_means(s, axis) += sign * jump;
    }
    spec.segment_lengths.assign(static_cast<size_t>(K), len);
    spec.seed = seed;
    return spec;
}

}  // namespace orcs
