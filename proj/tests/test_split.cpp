#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "orcs/rng.hpp"
#include "orcs/split.hpp"

using namespace orcs;

namespace {

Sequence seq1d(std::initializer_list<double> vals) {
    return Sequence::from_1d(std::vector<double>(vals));
}

// Random two-level sequence with bounded noise, arbitrary boundary.
Sequence two_level(Rng& rng, int n, int d, double noise) {
    const int boundary = rng.uniform_int(1, n - 1);
    const double gap = rng.uniform(0.5, 4.0);
    Mat x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j)
            x(i, j) = (i < boundary ? -gap / 2 : gap / 2) +
                      rng.uniform(-noise, noise);
    return Sequence(x);
}

}  // namespace

TEST_CASE("scan worked values") {
    // g(3) = 3*3/(1*6) * |6 - 0| = 9 with uniform weights
    const Sequence x = seq1d({0, 0, 0, 6, 6, 6});
    const SplitResult r = best_split(x, Weights::uniform(6));
    CHECK(r.index == 3);
    CHECK(r.lambda_star == doctest::Approx(9.0));

    // constant data: every g(i) = 0, tie resolved to the smallest index
    const SplitResult c = best_split(seq1d({5, 5, 5, 5}), Weights::uniform(4));
    CHECK(c.index == 1);
    CHECK(c.lambda_star == doctest::Approx(0.0));

    // sqrt-weighted: g(2) = 2*1/(3*sqrt(2/3)) * 10 = sqrt(2/3)*10
    const SplitResult s = best_split(seq1d({0, 0, 10}), Weights::sqrt_scheme(3));
    CHECK(s.index == 2);
    CHECK(s.lambda_star == doctest::Approx(std::sqrt(2.0 / 3.0) * 10.0));

    CHECK_THROWS_AS(best_split(seq1d({1}), Weights::uniform(1)),
                    std::invalid_argument);
}

TEST_CASE("exhaustive two-segment split worked values") {
    const SplitResult a = l0_best_split(seq1d({0, 0, 10}));
    CHECK(a.index == 2);
    CHECK(a.lambda_star == doctest::Approx(0.0));  // carries the minimal SSE

    const SplitResult b = l0_best_split(seq1d({0, 0, 0, 6, 6, 6}));
    CHECK(b.index == 3);
    CHECK(b.lambda_star == doctest::Approx(0.0));

    const SplitResult c = l0_best_split(seq1d({0, 1}));
    CHECK(c.index == 1);
    CHECK(c.lambda_star == doctest::Approx(0.0));

    // splitting [0,0,10] at 1 instead leaves SSE 50 on the right part
    PrefixStats stats(seq1d({0, 0, 10}));
    CHECK(stats.sse(1, 3) == doctest::Approx(50.0));
}

TEST_CASE("sqrt-weighted scan equals the exhaustive two-segment split") {
    Rng rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = rng.uniform_int(4, 120);
        const int d = rng.uniform_int(1, 5);
        const Sequence x = two_level(rng, n, d, rng.uniform(0.0, 1.0));
        const SplitResult weighted = best_split(x, Weights::sqrt_scheme(n));
        const SplitResult exact = l0_best_split(x);
        REQUIRE(weighted.index == exact.index);
    }
}

TEST_CASE("replacing both found segments by their means keeps the split") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = rng.uniform_int(4, 60);
        const int d = rng.uniform_int(1, 3);
        const Sequence x = two_level(rng, n, d, 0.8);
        const Weights w = Weights::sqrt_scheme(n);
        const SplitResult first = best_split(x, w);

        Mat replaced = x.mat();
        const Vec left = x.mat().topRows(first.index).colwise().mean();
        const Vec right =
            x.mat().bottomRows(n - first.index).colwise().mean();
        replaced.topRows(first.index).rowwise() = left.transpose();
        replaced.bottomRows(n - first.index).rowwise() = right.transpose();

        const SplitResult second = best_split(Sequence(replaced), w);
        CHECK(second.index == first.index);
    }
}

TEST_CASE("scan values are invariant to a constant shift") {
    Rng rng(29);
    const int n = 30, d = 2;
    Mat x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = rng.normal();
    Vec shift(d);
    shift << 13.5, -2.25;
    Mat shifted = x.rowwise() + shift.transpose();

    const Weights w = Weights::sqrt_scheme(n);
    const SplitResult a = best_split(Sequence(x), w, true);
    const SplitResult b = best_split(Sequence(shifted), w, true);
    CHECK(a.index == b.index);
    REQUIRE(a.g_values.size() == b.g_values.size());
    for (size_t i = 0; i < a.g_values.size(); ++i)
        CHECK(a.g_values[i] == doctest::Approx(b.g_values[i]).epsilon(1e-9));
}

TEST_CASE("block scan agrees with the sequence scan") {
    Rng rng(31);
    const int n = 25, d = 3;
    Mat x(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = rng.uniform(-2, 2);
    const Weights w = Weights::uniform(n);
    const SplitResult a = best_split(Sequence(x), w);
    const SplitResult b = best_split_block(x, w.values());
    CHECK(a.index == b.index);
    CHECK(a.lambda_star == doctest::Approx(b.lambda_star));
}
