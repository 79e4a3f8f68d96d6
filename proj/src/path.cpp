#include "orcs/path.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "orcs/prox.hpp"
#include "orcs/split.hpp"

namespace orcs {

GammaStar gamma_star(const Sequence& x) {
    const Eigen::RowVectorXd mean = x.mat().colwise().mean();
    GammaStar out;
    for (int i = 0; i < x.size(); ++i) {
        const double norm = (x.mat().row(i) - mean).norm();
        if (norm > out.value) {
            out.value = norm;
            out.index = i;
        }
    }
    return out;
}

LambdaStar lambda_star_given_gamma(const Sequence& x, double gamma,
                                   const Weights& w, double tol,
                                   int max_iter) {
    const int n = x.size();
    const int d = x.dim();
    const Weights wn = w.size() == n - 1 ? w : w.rebuilt(n);

    Mat z = Mat::Zero(n, d);
    Vec mu = x.mat().colwise().mean().transpose();
    LambdaStar out;
    out.converged = false;
    for (int iter = 0; iter < max_iter; ++iter) {
        for (int i = 0; i < n; ++i)
            z.row(i) =
                prox_l2(x.mat().row(i).transpose() - mu, gamma).transpose();
        Vec mu_next = (x.mat() - z).colwise().mean().transpose();
        const double change = (mu_next - mu).norm();
        mu = std::move(mu_next);
        if (change <= tol * (1.0 + mu.norm())) {
            out.converged = true;
            break;
        }
    }
    out.value = n >= 2 ? best_split_block(x.mat() - z, wn.values()).lambda_star
                       : 0.0;
    return out;
}

PathGrid sweep(const Sequence& x, const SweepOptions& opts) {
    const int g_count = opts.gamma_count;
    const int l_count = opts.lambda_count;
    if (g_count < 1 || l_count < 1)
        throw std::invalid_argument("grid needs at least one row and column");
    if (opts.lambda_floor <= 0.0 || opts.lambda_ceil < opts.lambda_floor ||
        opts.lambda_ceil > 1.0)
        throw std::invalid_argument(
            "lambda range fractions must satisfy 0 < floor <= ceil <= 1");

    const int n = x.size();
    const Weights w = opts.base.weights.size() == n - 1
                          ? opts.base.weights
                          : opts.base.weights.rebuilt(n);

    PathGrid grid;
    grid.n = n;
    grid.gamma_star_value = gamma_star(x).value;
    for (int j = 1; j <= g_count; ++j)
        grid.gamma_values.push_back(grid.gamma_star_value * j / (g_count + 1));
    grid.lambda_values.assign(static_cast<size_t>(g_count), {});
    grid.cells.assign(static_cast<size_t>(g_count), {});

    auto run_column = [&](int col) {
        const double gamma = grid.gamma_values[static_cast<size_t>(col)];
        const double peak =
            lambda_star_given_gamma(x, gamma, w, 1e-12, 500).value;

        std::vector<double> ladder;
        if (l_count == 1) {
            ladder.push_back(0.5 * peak);
        } else {
            const double hi = opts.lambda_ceil, lo = opts.lambda_floor;
            for (int k = 0; k < l_count; ++k)
                ladder.push_back(peak * hi *
                                 std::pow(lo / hi,
                                          static_cast<double>(k) /
                                              (l_count - 1)));
        }

        std::vector<PathCell> column;
        column.reserve(ladder.size());
        MuWorkspace ws;
        for (const double lambda : ladder) {
            SolverConfig cfg = opts.base;
            cfg.lambda = lambda;
            cfg.gamma = gamma;
            cfg.weights = w;
            OrcsSolution sol =
                solve_orcs(x, cfg, opts.warm_start ? &ws : nullptr);
            PathCell cell;
            cell.gamma = gamma;
            cell.lambda = lambda;
            cell.segments = sol.segmentation.segments();
            cell.outliers = sol.outliers.count();
            cell.objective = sol.objective;
            cell.converged = sol.converged;
            cell.starts = sol.segmentation.starts;
            cell.outlier_indices = sol.outliers.indices();
            column.push_back(std::move(cell));
        }
        grid.lambda_values[static_cast<size_t>(col)] = std::move(ladder);
        grid.cells[static_cast<size_t>(col)] = std::move(column);
    };

    const int workers = std::max(1, std::min(opts.threads, g_count));
    if (workers == 1) {
        for (int col = 0; col < g_count; ++col) run_column(col);
    } else {
        std::atomic<int> cursor{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (int col = cursor.fetch_add(1); col < g_count;
                     col = cursor.fetch_add(1))
                    run_column(col);
            });
        for (auto& th : pool) th.join();
    }
    return grid;
}

std::optional<int> estimate_outlier_count(const PathGrid& grid) {
    std::map<int, int> histogram;
    for (const auto& column : grid.cells)
        for (const PathCell& cell : column) {
            if (cell.outliers == 0) continue;
            if (2 * cell.outliers >= grid.n) continue;
            ++histogram[cell.outliers];
        }
    std::optional<int> best;
    int best_votes = 0;
    for (const auto& [count, votes] : histogram)
        if (votes > best_votes) {
            best_votes = votes;
            best = count;
        }
    return best;
}

}  // namespace orcs
