#pragma once

#include "orcs/core.hpp"

namespace orcs {

// Piecewise-constant mean estimation under a weighted group-fusion penalty:
//
//     minimize_mu  1/2 sum_i ||xhat_i - mu_i||^2
//                  + lambda * sum_{i<n} w_i ||mu_{i+1} - mu_i||_2
//
// Solved through the dual: with (D mu)_i = mu_{i+1} - mu_i,
//
//     maximize_{||u_i|| <= lambda w_i}  <u, D xhat> - 1/2 ||D^T u||^2,
//     mu(u) = xhat - D^T u,
//
// by accelerated projected gradient with step 1/4 (||D D^T|| < 4) and
// adaptive restart. Once the duality gap is small, the active boundary set is
// read off the clamped dual coordinates, the problem restricted to that
// segmentation is polished to machine precision, and the result is accepted
// only if it passes the optimality certificate below.

/// Optimality certificate for a candidate mu. With s_i = sum_{j<=i}(xhat_j -
/// mu_j), stationarity of the objective above is equivalent to:
///   - ||s_i||_2 <= lambda w_i for every interior i,
///   - s_n = 0,
///   - wherever ||mu_{i+1} - mu_i|| > jump_tol: ||s_i|| = lambda w_i and s_i
///     is anti-parallel to the jump (s_i = -lambda w_i * jump/||jump||).
struct KktReport {
    bool ok = false;
    double tube_excess = 0.0;     // max_i (||s_i|| - lambda w_i) / (lambda w_i)
    double sn_norm = 0.0;         // ||s_n||
    double jump_deficit = 0.0;    // max over jumps of 1 - ||s_i||/(lambda w_i)
    double worst_jump_cos = -1.0; // max over jumps of cos(s_i, jump); optimal -1
    int jumps = 0;
};

KktReport kkt_check(const Mat& xhat, const Mat& mu, double lambda,
                    const Vec& w, double jump_tol, double rel_tol = 1e-6);

struct MuSolution {
    Mat mu;                          // n x d fitted means
    std::vector<double> dual_norms;  // ||s_i||, i = 1..n-1
    int iterations = 0;
    bool converged = false;
    std::vector<int> starts;         // certified segment starts (first is 0)
    double jump_tol = 0.0;           // threshold used to read the segments
};

/// Reusable dual state for warm starts across related solves.
struct MuWorkspace {
    Mat dual;  // (n-1) x d, feasible for the weights it was produced with
    bool valid = false;
};

MuSolution solve_mu(const Mat& xhat, double lambda, const Weights& w,
                    double tol = 1e-8, int max_iter = 10000,
                    MuWorkspace* ws = nullptr);

/// Jump threshold tied to the data scale: 1e-6 * max_i ||x_i - mean(x)||.
double default_jump_tol(const Mat& xhat);

/// Group rows of mu into segments: a boundary is placed before row i+1
/// whenever ||mu_{i+1} - mu_i|| > jump_tol. Centroids are per-segment means
/// of mu.
Segmentation segmentation_from_mu(const Mat& mu, double jump_tol);

}  // namespace orcs
