#pragma once

#include <cmath>
#include <cstdint>

namespace orcs {

/// Small deterministic generator (splitmix64 core) with explicit stream
/// derivation, so Monte Carlo trials can be seeded independently per trial
/// index and reproduce exactly regardless of platform, thread count, or
/// evaluation order. All distribution mappings are implemented here rather
/// than delegated to std:: distributions, whose output is not pinned by the
/// standard.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {
        // burn-in decorrelates trivially related seeds
        next_u64();
        next_u64();
    }

    /// Independent generator for (seed, stream) pairs.
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
        Rng base(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
        return base;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next_u64() % span);
    }

    /// Standard normal via Box-Muller (no cached spare, fully deterministic).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Normal(0, sigma) rejected outside [-clip, clip].
    double truncated_normal(double sigma, double clip) {
        for (;;) {
            const double v = sigma * normal();
            if (v >= -clip && v <= clip) return v;
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace orcs
