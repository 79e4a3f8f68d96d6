#pragma once

#include <optional>

#include "orcs/core.hpp"
#include "orcs/solver.hpp"

namespace orcs {

/// Smallest offset cost at which no sample is flagged when fitting a single
/// segment: gamma* = max_i ||x_i - mean(x)||_2, with the 0-based index of the
/// attaining sample (smallest on ties) — the first sample to be flagged as
/// gamma decreases.
struct GammaStar {
    double value = 0.0;
    int index = 0;
};

GammaStar gamma_star(const Sequence& x);

/// Critical fusion strength for a given gamma: runs the single-segment
/// alternation mu <- mean(x - z), z_i <- prox_l2(x_i - mu, gamma) to its
/// fixed point, then scans x - z for the strongest boundary. For
/// gamma >= gamma* this equals best_split(x, w).lambda_star. Flagged (not
/// thrown) if the alternation cap is hit.
struct LambdaStar {
    double value = 0.0;
    bool converged = true;
};

LambdaStar lambda_star_given_gamma(const Sequence& x, double gamma,
                                   const Weights& w, double tol = 1e-12,
                                   int max_iter = 500);

struct PathCell {
    double gamma = 0.0;
    double lambda = 0.0;
    int segments = 0;
    int outliers = 0;
    double objective = 0.0;
    bool converged = false;
    std::vector<int> starts;
    std::vector<int> outlier_indices;
};

struct PathGrid {
    int n = 0;                       // sequence length the grid was built on
    double gamma_star_value = 0.0;
    std::vector<double> gamma_values;               // size G
    std::vector<std::vector<double>> lambda_values; // per gamma, size L
    std::vector<std::vector<PathCell>> cells;       // [gamma][lambda]
};

struct SweepOptions {
    int gamma_count = 35;
    int lambda_count = 35;
    SolverConfig base;        // lambda/gamma/weights length are overwritten
    bool warm_start = true;   // chain duals within a gamma column
    int threads = 1;          // parallelism across gamma columns
    double lambda_floor = 1e-3;        // lowest lambda as a fraction of lambda*
    double lambda_ceil = 1.0 - 1e-6;   // highest lambda as a fraction of lambda*
};

/// Solve a (gamma, lambda) grid: gamma_j = gamma* * j/(G+1) for j = 1..G
/// (uniform, endpoints excluded), and per gamma a log-spaced lambda ladder in
/// [lambda*(gamma) * lambda_floor, lambda*(gamma) * lambda_ceil], descending
/// within a column so dual warm starts carry over (a single-point ladder uses
/// lambda*(gamma)/2). Per-cell failures are recorded in the cell's converged
/// flag; the sweep itself never aborts. Output is identical for any thread
/// count.
PathGrid sweep(const Sequence& x, const SweepOptions& opts);

/// Most common per-cell outlier count across the grid, excluding empty cells
/// (count 0) and saturated cells (count >= n/2). Ties toward the smallest
/// count. Empty after exclusion => no estimate.
std::optional<int> estimate_outlier_count(const PathGrid& grid);

}  // namespace orcs
