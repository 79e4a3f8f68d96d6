#pragma once

#include "orcs/core.hpp"
#include "orcs/mu_solver.hpp"

namespace orcs {

// Joint mean/offset estimation:
//
//     minimize_{mu, z}  1/2 sum_i ||x_i - z_i - mu_i||^2
//                       + lambda * sum_i w_i ||mu_{i+1} - mu_i||_2
//                       + gamma * sum_i ||z_i||_q
//
// by exact alternation: the z-step is a per-sample prox of x_i - mu_i, the
// mu-step solves the fusion problem on x - z (warm-started, and never
// accepted if it would increase the objective). Samples with a nonzero z are
// the detected outliers.

struct OrcsSolution {
    Segmentation segmentation;
    OutlierAssignment outliers;
    double objective = 0.0;    // final value of the objective above
    int outer_iterations = 0;
    bool converged = false;
    /// Objective value after every half-step (initial mu fit, then z-step /
    /// mu-step alternately); non-increasing by construction.
    std::vector<double> objective_trace;
};

/// cfg.lambda >= 0, cfg.gamma in [0, +inf], cfg.q in {1,2}; cfg.weights must
/// have x.size()-1 entries. gamma = +inf disables offsets entirely (the
/// result then equals the pure fusion fit). Never throws on non-convergence:
/// the result is returned with converged = false. A caller-held workspace
/// carries the fusion dual across related solves (e.g. a lambda ladder).
OrcsSolution solve_orcs(const Sequence& x, const SolverConfig& cfg,
                        MuWorkspace* ws = nullptr);

/// Objective evaluated at a raw (not yet segment-averaged) mean matrix; used
/// for the per-half-step trace.
double objective_raw(const Sequence& x, const Mat& mu,
                     const OutlierAssignment& z, const SolverConfig& cfg);

}  // namespace orcs
