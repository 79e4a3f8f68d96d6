#include "orcs/mu_solver.hpp"

#include <algorithm>
#include <cmath>

namespace orcs {

namespace {

constexpr double kTiny = 1e-300;

void project_rows(Mat& u, const Vec& radii) {
    for (int j = 0; j < u.rows(); ++j) {
        const double norm = u.row(j).norm();
        if (norm > radii[j]) u.row(j) *= radii[j] / norm;
    }
}

// Weighted fused-mean model shared by the full problem and its restriction
// to a candidate segmentation:
//
//     minimize_c  1/2 sum_s m_s ||a_s - c_s||^2 + sum_j r_j ||c_{j+1} - c_j||
//
// solved in the dual: v is (S-1) x d with ||v_j|| <= r_j, and the primal
// candidate is c_s(v) = a_s - (v_{s-1} - v_s)/m_s. The ascent gradient is
// D c(v) and ||D diag(1/m) D^T|| <= 4/min(m), so step = min(m)/4 is safe.
struct FusedState {
    const Mat& a;
    const Vec& mass;
    const Vec& radii;
    Mat v;  // main iterate, kept feasible
    Mat y;  // extrapolation point
    double t = 1.0;
    double step;
    int iterations = 0;

    FusedState(const Mat& a_, const Vec& mass_, const Vec& radii_, Mat v0)
        : a(a_), mass(mass_), radii(radii_), v(std::move(v0)) {
        if (v.rows() != a.rows() - 1 || v.cols() != a.cols())
            v = Mat::Zero(a.rows() - 1, a.cols());
        project_rows(v, radii);
        y = v;
        step = 0.25 * mass.minCoeff();
    }

    Mat primal(const Mat& dual) const {
        const int s = static_cast<int>(a.rows());
        Mat c = a;
        c.topRows(s - 1).array() +=
            dual.array().colwise() / mass.head(s - 1).array();
        c.bottomRows(s - 1).array() -=
            dual.array().colwise() / mass.tail(s - 1).array();
        return c;
    }

    void step_once() {
        const int s = static_cast<int>(a.rows());
        Mat c = primal(y);
        Mat next = y + step * (c.bottomRows(s - 1) - c.topRows(s - 1));
        project_rows(next, radii);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double restart = ((y - next).array() * (next - v).array()).sum();
        if (restart > 0.0) {
            t = 1.0;
            y = next;
        } else {
            y = next + ((t - 1.0) / t_next) * (next - v);
            t = t_next;
        }
        v = std::move(next);
        ++iterations;
    }
};

struct Candidate {
    Mat c;
    double gap = std::numeric_limits<double>::infinity();
    double primal = 0.0;
};

Candidate evaluate(const FusedState& st) {
    const int s = static_cast<int>(st.a.rows());
    Candidate cand;
    cand.c = st.primal(st.v);
    const Mat dc = cand.c.bottomRows(s - 1) - cand.c.topRows(s - 1);
    double fuse = 0.0, pair_dot = 0.0, fit = 0.0;
    for (int j = 0; j < s - 1; ++j) {
        fuse += st.radii[j] * dc.row(j).norm();
        pair_dot += st.v.row(j).dot(dc.row(j));
    }
    for (int i = 0; i < s; ++i)
        fit += st.mass[i] * (st.a.row(i) - cand.c.row(i)).squaredNorm();
    cand.primal = 0.5 * fit + fuse;
    cand.gap = fuse - pair_dot;
    return cand;
}

// Runs accelerated dual ascent until the duality gap falls below
// rel_target * max(primal, tiny) or the absolute iteration cap is hit.
// min_steps forces progress before the entry gap test may return.
Candidate advance(FusedState& st, double rel_target, int iter_cap,
                  int min_steps) {
    constexpr int kCheck = 8;
    int done = 0;
    while (true) {
        if (done >= min_steps) {
            Candidate cand = evaluate(st);
            if (cand.gap <= rel_target * std::max(cand.primal, kTiny) ||
                st.iterations >= iter_cap)
                return cand;
        }
        for (int k = 0; k < kCheck && st.iterations < iter_cap; ++k) {
            st.step_once();
            ++done;
        }
        if (st.iterations >= iter_cap && done < min_steps) return evaluate(st);
    }
}

// Fixed-point sharpening at a frozen jump-direction configuration:
//   d_j = unit(c_{j+1} - c_j),  c_s = a_s + (r_s d_s - r_{s-1} d_{s-1}) / m_s.
// Returns -1 on convergence, -2 on stall, or the index of a boundary whose
// jump collapsed below drop_tol (the caller should merge it and retry).
int refine_directions(const Mat& a, const Vec& mass, const Vec& radii, Mat& c,
                      double drop_tol, int max_rounds = 80) {
    const int s = static_cast<int>(a.rows());
    if (s == 1) {
        c = a;
        return -1;
    }
    const double scale = 1.0 + c.cwiseAbs().maxCoeff();
    Mat dirs(s - 1, a.cols());
    for (int round = 0; round < max_rounds; ++round) {
        for (int j = 0; j < s - 1; ++j) {
            const Vec jump = (c.row(j + 1) - c.row(j)).transpose();
            const double norm = jump.norm();
            if (norm <= drop_tol) return j;
            dirs.row(j) = jump.transpose() / norm;
        }
        Mat fresh = a;
        for (int i = 0; i < s; ++i) {
            if (i < s - 1) fresh.row(i) += radii[i] / mass[i] * dirs.row(i);
            if (i > 0) fresh.row(i) -= radii[i - 1] / mass[i] * dirs.row(i - 1);
        }
        const double delta = (fresh - c).cwiseAbs().maxCoeff();
        c = std::move(fresh);
        if (delta <= 1e-15 * scale) return -1;
    }
    return -2;
}

// Exact solve of the model restricted to fixed segment starts; neighboring
// segments are merged whenever the restricted optimum collapses their
// boundary. Returns the full-length mean matrix.
Mat polish_segments(const Mat& xhat, const Vec& radii_full,
                    std::vector<int> starts, const Mat& dual_full,
                    double drop_tol) {
    const int n = static_cast<int>(xhat.rows());
    const int d = static_cast<int>(xhat.cols());
    while (true) {
        const int s = static_cast<int>(starts.size());
        Mat a(s, d);
        Vec mass(s), radii(std::max(s - 1, 0));
        Mat v0 = Mat::Zero(std::max(s - 1, 0), d);
        for (int k = 0; k < s; ++k) {
            const int lo = starts[static_cast<size_t>(k)];
            const int hi = k + 1 < s ? starts[static_cast<size_t>(k) + 1] : n;
            mass[k] = hi - lo;
            a.row(k) = xhat.middleRows(lo, hi - lo).colwise().mean();
            if (k + 1 < s) {
                radii[k] = radii_full[starts[static_cast<size_t>(k) + 1] - 1];
                v0.row(k) = dual_full.row(starts[static_cast<size_t>(k) + 1] - 1);
            }
        }
        if (s == 1) {
            return a.row(0).replicate(n, 1);
        }

        FusedState reduced(a, mass, radii, std::move(v0));
        Candidate cand = advance(reduced, 1e-13, 20000, 0);
        Mat c = cand.c;
        const int verdict = refine_directions(a, mass, radii, c, drop_tol);
        if (verdict >= 0) {
            starts.erase(starts.begin() + verdict + 1);
            continue;
        }
        if (verdict == -2) c = cand.c;  // keep the iterative answer

        Mat mu(n, d);
        for (int k = 0; k < s; ++k) {
            const int lo = starts[static_cast<size_t>(k)];
            const int hi = k + 1 < s ? starts[static_cast<size_t>(k) + 1] : n;
            mu.middleRows(lo, hi - lo) = c.row(k).replicate(hi - lo, 1);
        }
        return mu;
    }
}

std::vector<double> partial_sum_norms(const Mat& xhat, const Mat& mu) {
    const int n = static_cast<int>(xhat.rows());
    std::vector<double> norms;
    norms.reserve(static_cast<size_t>(n) - 1);
    Vec s = Vec::Zero(xhat.cols());
    for (int i = 0; i + 1 < n; ++i) {
        s += (xhat.row(i) - mu.row(i)).transpose();
        norms.push_back(s.norm());
    }
    return norms;
}

}  // namespace

KktReport kkt_check(const Mat& xhat, const Mat& mu, double lambda,
                    const Vec& w, double jump_tol, double rel_tol) {
    const int n = static_cast<int>(xhat.rows());
    if (mu.rows() != n || mu.cols() != xhat.cols())
        throw std::invalid_argument("mean matrix shape mismatch");
    if (w.size() != n - 1)
        throw std::invalid_argument("need one weight per interior boundary");

    KktReport rep;
    rep.tube_excess = -1.0;
    rep.worst_jump_cos = -1.0;
    Vec s = Vec::Zero(xhat.cols());
    for (int i = 0; i < n; ++i) {
        s += (xhat.row(i) - mu.row(i)).transpose();
        if (i + 1 >= n) break;
        const double radius = lambda * w[i];
        const double sn = s.norm();
        rep.tube_excess = std::max(
            rep.tube_excess, (sn - radius) / std::max(radius, kTiny));
        const Vec jump = (mu.row(i + 1) - mu.row(i)).transpose();
        const double jn = jump.norm();
        if (jn > jump_tol) {
            ++rep.jumps;
            rep.jump_deficit = std::max(
                rep.jump_deficit, 1.0 - sn / std::max(radius, kTiny));
            const double cos =
                sn * jn > 0.0 ? s.dot(jump) / (sn * jn) : 1.0;
            rep.worst_jump_cos = std::max(rep.worst_jump_cos, cos);
        }
    }
    rep.sn_norm = s.norm();
    const double sn_allow = rel_tol * (1.0 + xhat.norm());
    rep.ok = rep.tube_excess <= rel_tol && rep.jump_deficit <= rel_tol &&
             (rep.jumps == 0 || rep.worst_jump_cos <= -(1.0 - 1e-6)) &&
             rep.sn_norm <= sn_allow;
    return rep;
}

double default_jump_tol(const Mat& xhat) { return 1e-6 * data_scale(xhat); }

Segmentation segmentation_from_mu(const Mat& mu, double jump_tol) {
    const int n = static_cast<int>(mu.rows());
    Segmentation seg;
    seg.starts.push_back(0);
    for (int i = 0; i + 1 < n; ++i)
        if ((mu.row(i + 1) - mu.row(i)).norm() > jump_tol)
            seg.starts.push_back(i + 1);
    for (size_t k = 0; k < seg.starts.size(); ++k) {
        const int lo = seg.starts[k];
        const int hi =
            k + 1 < seg.starts.size() ? seg.starts[k + 1] : n;
        seg.centroids.push_back(
            mu.middleRows(lo, hi - lo).colwise().mean().transpose());
    }
    return seg;
}

MuSolution solve_mu(const Mat& xhat, double lambda, const Weights& w,
                    double tol, int max_iter, MuWorkspace* ws) {
    const int n = static_cast<int>(xhat.rows());
    const int d = static_cast<int>(xhat.cols());
    if (n < 1 || d < 1) throw std::invalid_argument("empty input");

    MuSolution out;
    out.jump_tol = default_jump_tol(xhat);

    if (n == 1 || lambda <= 0.0) {
        out.mu = xhat;
        out.converged = true;
        out.starts = segmentation_from_mu(out.mu, out.jump_tol).starts;
        out.dual_norms = n > 1 ? partial_sum_norms(xhat, out.mu)
                               : std::vector<double>{};
        if (ws) ws->valid = false;
        return out;
    }

    const Vec wv = w.size() == n - 1 ? w.values() : w.rebuilt(n).values();
    const Vec radii = lambda * wv;
    const double drop_tol = 1e-3 * out.jump_tol;

    auto assemble = [&](Mat mu, bool converged, int iterations) {
        out.mu = std::move(mu);
        out.converged = converged;
        out.iterations = iterations;
        out.dual_norms = partial_sum_norms(xhat, out.mu);
        out.starts = segmentation_from_mu(out.mu, out.jump_tol).starts;
        if (ws) {
            ws->dual.resize(n - 1, d);
            Vec s = Vec::Zero(d);
            for (int i = 0; i + 1 < n; ++i) {
                s += (xhat.row(i) - out.mu.row(i)).transpose();
                ws->dual.row(i) = -s.transpose();
            }
            project_rows(ws->dual, radii);
            ws->valid = true;
        }
        return out;
    };

    // Constant-fit fast path: certifies immediately whenever the fusion
    // strength dominates every split score.
    {
        Mat mu0 = xhat.colwise().mean().replicate(n, 1);
        if (kkt_check(xhat, mu0, lambda, wv, out.jump_tol).ok)
            return assemble(std::move(mu0), true, 0);
    }

    const Vec mass = Vec::Ones(n);
    Mat v0 = ws && ws->valid && ws->dual.rows() == n - 1 && ws->dual.cols() == d
                 ? ws->dual
                 : Mat::Zero(n - 1, d);
    FusedState state(xhat, mass, radii, std::move(v0));

    double try_rel = std::min(1e-4, std::max(tol, 1e-18));
    int min_steps = 0;
    Mat mu_last;
    while (true) {
        Candidate cand = advance(state, try_rel, max_iter, min_steps);
        std::vector<int> starts{0};
        for (int j = 0; j + 1 < n; ++j) {
            const bool clamped = state.v.row(j).norm() >= radii[j] * (1.0 - 1e-7);
            const bool jumpy =
                (cand.c.row(j + 1) - cand.c.row(j)).norm() > out.jump_tol;
            if (clamped && jumpy) starts.push_back(j + 1);
        }
        mu_last = polish_segments(xhat, radii, std::move(starts), state.v,
                                  drop_tol);
        if (kkt_check(xhat, mu_last, lambda, wv, out.jump_tol).ok)
            return assemble(std::move(mu_last), true, state.iterations);
        if (state.iterations >= max_iter) break;
        try_rel = std::max(try_rel * 0.1, 1e-18);
        min_steps = 8;
    }
    return assemble(std::move(mu_last), false, state.iterations);
}

}  // namespace orcs
