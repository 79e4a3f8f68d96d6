#include <cmath>
#include <limits>

#include "doctest.h"
#include "orcs/core.hpp"
#include "orcs/prox.hpp"
#include "orcs/rng.hpp"

using namespace orcs;

namespace {

Vec make_vec(std::initializer_list<double> vals) {
    Vec v(static_cast<Eigen::Index>(vals.size()));
    Eigen::Index k = 0;
    for (double x : vals) v[k++] = x;
    return v;
}

// Brute-force minimizer of 1/2||v - z||^2 + gamma*||z||_q over a fine grid.
Vec grid_prox(const Vec& v, double gamma, int q) {
    const double radius = v.norm() + 1.0;
    const double step = 1e-3 * radius;
    Vec best = Vec::Zero(v.size());
    double best_val = std::numeric_limits<double>::infinity();
    if (v.size() == 1) {
        for (double z = -radius; z <= radius; z += step) {
            const double val =
                0.5 * (v[0] - z) * (v[0] - z) + gamma * std::abs(z);
            if (val < best_val) {
                best_val = val;
                best[0] = z;
            }
        }
        return best;
    }
    // 2-D: the l2 case is radial, the l1 case separable; the grid stays honest
    for (double a = -radius; a <= radius; a += step * 4)
        for (double b = -radius; b <= radius; b += step * 4) {
            Vec z = make_vec({a, b});
            const double pen = q == 1 ? z.lpNorm<1>() : z.norm();
            const double val = 0.5 * (v - z).squaredNorm() + gamma * pen;
            if (val < best_val) {
                best_val = val;
                best = z;
            }
        }
    return best;
}

}  // namespace

TEST_CASE("group shrinkage worked values") {
    const Vec v = make_vec({3, 4});
    const Vec out = prox_l2(v, 1.0);  // ||v|| = 5, scale by 1 - 1/5
    CHECK(out[0] == doctest::Approx(2.4));
    CHECK(out[1] == doctest::Approx(3.2));
    CHECK(prox_l2(v, 5.0).norm() == doctest::Approx(0.0));  // at the threshold
    CHECK((prox_l2(v, 0.0) - v).norm() == doctest::Approx(0.0));
    CHECK(prox_l2(v, std::numeric_limits<double>::infinity()).norm() ==
          doctest::Approx(0.0));
    CHECK(prox_l2(Vec::Zero(3), 0.7).norm() == doctest::Approx(0.0));
}

TEST_CASE("coordinate shrinkage worked values") {
    const Vec a = prox_l1(make_vec({3, -0.5}), 1.0);
    CHECK(a[0] == doctest::Approx(2.0));
    CHECK(a[1] == doctest::Approx(0.0));
    CHECK(prox_l1(make_vec({0, 0}), 2.0).norm() == doctest::Approx(0.0));
    CHECK(prox_l1(make_vec({-2}), 0.5)[0] == doctest::Approx(-1.5));
}

TEST_CASE("group shrinkage stays parallel with a factor in [0,1]") {
    Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform_int(0, 4));
        Vec v(d);
        for (int k = 0; k < d; ++k) v[k] = rng.normal() * 3;
        const double gamma = rng.uniform(0, 4);
        const Vec out = prox_l2(v, gamma);
        if (v.norm() == 0.0) continue;
        const double c = out.dot(v) / v.squaredNorm();
        CHECK(c >= -1e-12);
        CHECK(c <= 1.0 + 1e-12);
        CHECK((out - c * v).norm() <= 1e-10 * (1.0 + v.norm()));
    }
}

TEST_CASE("both operators are non-expansive") {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform_int(0, 4));
        Vec u(d), v(d);
        for (int k = 0; k < d; ++k) {
            u[k] = rng.normal() * 2;
            v[k] = rng.normal() * 2;
        }
        const double gamma = rng.uniform(0, 3);
        CHECK((prox_l2(u, gamma) - prox_l2(v, gamma)).norm() <=
              (u - v).norm() + 1e-12);
        CHECK((prox_l1(u, gamma) - prox_l1(v, gamma)).norm() <=
              (u - v).norm() + 1e-12);
    }
}

TEST_CASE("shrinkage minimizes the penalized proximal objective") {
    Rng rng(5);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = trial % 2 == 0 ? 1 : 2;
        Vec v(d);
        for (int k = 0; k < d; ++k) v[k] = rng.uniform(-3, 3);
        const double gamma = rng.uniform(0.1, 2.0);
        for (int q : {1, 2}) {
            const Vec exact = prox_lq(v, gamma, q);
            const Vec grid = grid_prox(v, gamma, q);
            const auto value = [&](const Vec& z) {
                const double pen = q == 1 ? z.lpNorm<1>() : z.norm();
                return 0.5 * (v - z).squaredNorm() + gamma * pen;
            };
            // the closed form can never lose to the grid, and must be close
            CHECK(value(exact) <= value(grid) + 1e-12);
            CHECK(value(grid) - value(exact) <= 1e-3);
        }
    }
}

TEST_CASE("nonzero shrinkage output exactly characterizes norm exceedance") {
    Rng rng(6);
    for (int trial = 0; trial < 300; ++trial) {
        const int d = 1 + static_cast<int>(rng.uniform_int(0, 3));
        Vec v(d);
        for (int k = 0; k < d; ++k) v[k] = rng.normal();
        const double gamma = rng.uniform(0, 2);
        const bool detected = prox_l2(v, gamma).norm() > 0.0;
        CHECK(detected == (v.norm() > gamma));
    }
}
