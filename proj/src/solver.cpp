#include "orcs/solver.hpp"

#include <cmath>

#include "orcs/prox.hpp"

namespace orcs {

double objective_raw(const Sequence& x, const Mat& mu,
                     const OutlierAssignment& z, const SolverConfig& cfg) {
    const int n = x.size();
    if (mu.rows() != n || mu.cols() != x.dim())
        throw std::invalid_argument("mean matrix shape mismatch");
    const Weights w = cfg.weights.size() == n - 1 ? cfg.weights
                                                  : cfg.weights.rebuilt(n);
    Mat resid = x.mat() - mu;
    for (const auto& [i, zi] : z.entries()) resid.row(i) -= zi.transpose();

    double fuse = 0.0;
    for (int i = 0; i + 1 < n; ++i)
        fuse += w.values()[i] * (mu.row(i + 1) - mu.row(i)).norm();

    double offset = 0.0;
    if (z.count() > 0) {
        if (std::isinf(cfg.gamma))
            return std::numeric_limits<double>::infinity();
        offset = cfg.gamma * z.norm_sum(cfg.q);
    }
    return 0.5 * resid.squaredNorm() + cfg.lambda * fuse + offset;
}

OrcsSolution solve_orcs(const Sequence& x, const SolverConfig& cfg,
                        MuWorkspace* ws_ext) {
    if (cfg.lambda < 0.0) throw std::invalid_argument("fusion strength must be >= 0");
    if (cfg.gamma < 0.0) throw std::invalid_argument("offset cost must be >= 0");
    if (cfg.q != 1 && cfg.q != 2) throw std::invalid_argument("offset norm must be 1 or 2");

    const int n = x.size();
    const int d = x.dim();
    const Weights w = cfg.weights.size() == n - 1 ? cfg.weights
                                                  : cfg.weights.rebuilt(n);

    OrcsSolution out;
    MuWorkspace ws_local;
    MuWorkspace& ws = ws_ext ? *ws_ext : ws_local;

    auto z_assignment = [&](const Mat& z) {
        OutlierAssignment assign;
        for (int i = 0; i < n; ++i)
            if (z.row(i).norm() > 0.0) assign.set(i, z.row(i).transpose());
        return assign;
    };

    Mat z = Mat::Zero(n, d);
    MuSolution fit = solve_mu(x.mat(), cfg.lambda, w, cfg.tol, cfg.max_iter, &ws);
    Mat mu = fit.mu;
    OutlierAssignment z_now;
    double value = objective_raw(x, mu, z_now, cfg);
    out.objective_trace.push_back(value);

    std::vector<int> prev_outliers;
    std::vector<int> prev_starts = fit.starts;
    bool stopped = n == 1;  // a single sample needs no alternation

    for (int round = 0; round < cfg.alt_max_iter && !stopped; ++round) {
        out.outer_iterations = round + 1;

        // Offset step: exact per-sample prox of the residual.
        for (int i = 0; i < n; ++i)
            z.row(i) = prox_lq((x.mat().row(i) - mu.row(i)).transpose(),
                               cfg.gamma, cfg.q)
                           .transpose();
        z_now = z_assignment(z);
        value = objective_raw(x, mu, z_now, cfg);
        out.objective_trace.push_back(value);

        // Mean step on the offset-corrected data; never accept an increase.
        const Mat xhat = x.mat() - z;
        MuSolution cand =
            solve_mu(xhat, cfg.lambda, w, cfg.tol, cfg.max_iter, &ws);
        const double cand_value = objective_raw(x, cand.mu, z_now, cfg);
        if (cand_value <= value) {
            mu = cand.mu;
            fit = std::move(cand);
            value = cand_value;
        }
        out.objective_trace.push_back(value);

        const std::vector<int> outliers = z_now.indices();
        const std::vector<int>& starts = fit.starts;
        const bool same_sets = outliers == prev_outliers && starts == prev_starts;
        const bool tiny_change =
            std::abs(out.objective_trace[out.objective_trace.size() - 3] - value) <=
            cfg.tol * std::max(1.0, std::abs(value));
        if (same_sets || tiny_change) stopped = true;
        prev_outliers = outliers;
        prev_starts = starts;
    }

    out.segmentation = segmentation_from_mu(mu, fit.jump_tol);
    out.outliers = z_now;
    out.objective = objective(x, out.segmentation, out.outliers, cfg);
    out.converged = stopped && fit.converged;
    return out;
}

}  // namespace orcs
