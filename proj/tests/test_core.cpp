#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "orcs/core.hpp"
#include "orcs/rng.hpp"

using namespace orcs;

namespace {

Sequence seq1d(std::initializer_list<double> vals) {
    return Sequence::from_1d(std::vector<double>(vals));
}

}  // namespace

TEST_CASE("sequence validation") {
    CHECK_THROWS_AS(Sequence(Mat(0, 3)), std::invalid_argument);
    Mat bad(2, 1);
    bad << 1.0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Sequence{bad}, std::invalid_argument);
    CHECK(seq1d({1, 2, 3}).size() == 3);
    CHECK(seq1d({1, 2, 3}).dim() == 1);
}

TEST_CASE("weight schemes") {
    const Weights u = Weights::uniform(5);
    REQUIRE(u.values().size() == 4);
    for (double w : u.values()) CHECK(w == 1.0);

    const Weights s = Weights::sqrt_scheme(6);
    REQUIRE(s.values().size() == 5);
    CHECK(s.values()[2] == doctest::Approx(std::sqrt(3.0 * 3.0 / 6.0)));  // i=3
    CHECK(s.values()[0] == doctest::Approx(std::sqrt(1.0 * 5.0 / 6.0)));  // i=1

    const Weights p = Weights::power(4, 0.5);
    CHECK(p.values()[0] == doctest::Approx(std::sqrt(3.0)));  // (1*3)^0.5
    CHECK_THROWS_AS(Weights::power(4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(Weights::power(4, -0.1), std::invalid_argument);
}

TEST_CASE("segmentation accessors") {
    Segmentation seg;
    seg.starts = {0, 3, 5};
    seg.centroids = {Vec::Zero(1), Vec::Zero(1), Vec::Zero(1)};
    CHECK(seg.segments() == 3);
    CHECK(seg.boundaries() == std::vector<int>{3, 5});
    CHECK(seg.segment_of(0) == 0);
    CHECK(seg.segment_of(2) == 0);
    CHECK(seg.segment_of(3) == 1);
    CHECK(seg.segment_of(4) == 1);
    CHECK(seg.segment_of(5) == 2);
}

TEST_CASE("outlier assignment") {
    OutlierAssignment z;
    Vec v(2);
    v << 3, 4;
    z.set(4, v);
    z.set(1, Vec::Zero(2));  // zero vectors are dropped
    CHECK(z.indices() == std::vector<int>{4});
    CHECK(z.norm_sum(2) == doctest::Approx(5.0));
    CHECK(z.norm_sum(1) == doctest::Approx(7.0));
    const Mat dense = z.to_dense(6, 2);
    CHECK(dense.row(4).norm() == doctest::Approx(5.0));
    CHECK(dense.sum() == doctest::Approx(7.0));
    z.set(4, Vec::Zero(2));  // resetting to zero erases
    CHECK(z.indices().empty());
}

TEST_CASE("objective worked values") {
    SolverConfig cfg;

    // perfect single-segment fit scores zero
    {
        const Sequence x = seq1d({0, 0});
        Segmentation seg;
        seg.starts = {0};
        seg.centroids = {Vec::Zero(1)};
        cfg.lambda = 2.0;
        cfg.gamma = 3.0;
        cfg.weights = Weights::uniform(2);
        CHECK(objective(x, seg, {}, cfg) == doctest::Approx(0.0));
    }

    // exact two-segment fit pays only the fusion term: lambda * |2 - 0| = 2
    {
        const Sequence x = seq1d({0, 2});
        Segmentation seg;
        seg.starts = {0, 1};
        Vec a(1), b(1);
        a << 0;
        b << 2;
        seg.centroids = {a, b};
        cfg.lambda = 1.0;
        cfg.gamma = 0.0;
        cfg.weights = Weights::uniform(2);
        CHECK(objective(x, seg, {}, cfg) == doctest::Approx(2.0));
    }

    // one segment at the mean with the second sample explained by an offset:
    // 0.5*(1 + 0) + 0 + gamma*|1| = 1.5
    {
        const Sequence x = seq1d({0, 2});
        Segmentation seg;
        seg.starts = {0};
        Vec mu(1);
        mu << 1;
        seg.centroids = {mu};
        OutlierAssignment z;
        Vec z1(1);
        z1 << 1;
        z.set(1, z1);
        cfg.lambda = 0.0;
        cfg.gamma = 1.0;
        cfg.q = 2;
        cfg.weights = Weights::uniform(2);
        CHECK(objective(x, seg, z, cfg) == doctest::Approx(1.5));
    }
}

TEST_CASE("objective rejects offsets when they are disabled") {
    const Sequence x = seq1d({0, 2});
    Segmentation seg;
    seg.starts = {0};
    seg.centroids = {Vec::Ones(1)};
    OutlierAssignment z;
    Vec z1(1);
    z1 << 1;
    z.set(1, z1);
    SolverConfig cfg;
    cfg.gamma = std::numeric_limits<double>::infinity();
    cfg.weights = Weights::uniform(2);
    CHECK_THROWS_AS(objective(x, seg, z, cfg), std::invalid_argument);
    // with z = 0 the infinite penalty contributes nothing
    CHECK(std::isfinite(objective(x, seg, {}, cfg)));
}

TEST_CASE("objective is invariant under coordinate permutation") {
    Rng rng(7);
    const int n = 12, d = 4;
    Mat x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = rng.normal();

    Segmentation seg;
    seg.starts = {0, 5, 9};
    seg.centroids.assign(3, Vec::Zero(d));
    for (auto& c : seg.centroids)
        for (int j = 0; j < d; ++j) c[j] = rng.normal();
    OutlierAssignment z;
    Vec zv(d);
    for (int j = 0; j < d; ++j) zv[j] = rng.normal();
    z.set(7, zv);

    SolverConfig cfg;
    cfg.lambda = 0.8;
    cfg.gamma = 1.1;
    cfg.weights = Weights::sqrt_scheme(n);
    const double before = objective(Sequence(x), seg, z, cfg);

    const std::vector<int> perm = {2, 0, 3, 1};
    Mat xp(n, d);
    Segmentation segp = seg;
    OutlierAssignment zp;
    Vec zpv(d);
    for (int j = 0; j < d; ++j) {
        xp.col(j) = x.col(perm[j]);
        for (int s = 0; s < 3; ++s) segp.centroids[s][j] = seg.centroids[s][perm[j]];
        zpv[j] = zv[perm[j]];
    }
    zp.set(7, zpv);
    CHECK(objective(Sequence(xp), segp, zp, cfg) == doctest::Approx(before));
}

TEST_CASE("segment sse worked values") {
    const Sequence x = seq1d({5, 5, 9, 9});
    PrefixStats stats(x);
    CHECK(stats.sse(0, 4) == doctest::Approx(16.0));  // mean 7, residuals +-2
    CHECK(stats.sse(1, 2) == doctest::Approx(0.0));
    CHECK(segment_sse(seq1d({0, 0, 0}), 0, 3) == doctest::Approx(0.0));
    CHECK_THROWS_AS(segment_sse(x, 2, 2), std::out_of_range);
    CHECK(stats.mean(0, 2)[0] == doctest::Approx(5.0));
    CHECK(stats.sum(0, 4)[0] == doctest::Approx(28.0));
}

TEST_CASE("prefix sse matches direct computation on random data") {
    Rng rng(11);
    const int n = 40, d = 3;
    Mat x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(-5, 5);
    const Sequence s(x);
    PrefixStats stats(s);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b <= n; ++b) {
            const Vec mean = x.middleRows(a, b - a).colwise().mean();
            const double direct =
                (x.middleRows(a, b - a).rowwise() - mean.transpose())
                    .squaredNorm();
            CHECK(stats.sse(a, b) == doctest::Approx(direct).epsilon(1e-9));
        }
}

TEST_CASE("data scale") {
    CHECK(data_scale(seq1d({1, 1, 1}).mat()) == doctest::Approx(0.0));
    CHECK(data_scale(seq1d({0, 2}).mat()) == doctest::Approx(1.0));
}
