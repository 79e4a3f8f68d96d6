#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace orcs {

/// Group soft-threshold: argmin_z 1/2||v - z||^2 + gamma*||z||_2,
/// i.e. v * max(0, 1 - gamma/||v||). Returns zero when ||v|| <= gamma
/// (including v = 0) and v itself when gamma = 0.
inline Eigen::VectorXd prox_l2(const Eigen::VectorXd& v, double gamma) {
    if (gamma <= 0.0) return v;
    const double norm = v.norm();
    if (norm <= gamma) return Eigen::VectorXd::Zero(v.size());
    return v * (1.0 - gamma / norm);
}

/// Coordinate-wise soft-threshold: argmin_z 1/2||v - z||^2 + gamma*||z||_1.
inline Eigen::VectorXd prox_l1(const Eigen::VectorXd& v, double gamma) {
    if (gamma <= 0.0) return v;
    Eigen::VectorXd out(v.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        const double mag = std::abs(v[k]) - gamma;
        out[k] = mag > 0.0 ? (v[k] > 0.0 ? mag : -mag) : 0.0;
    }
    return out;
}

/// Dispatch on the offset norm q in {1, 2}.
inline Eigen::VectorXd prox_lq(const Eigen::VectorXd& v, double gamma, int q) {
    return q == 1 ? prox_l1(v, gamma) : prox_l2(v, gamma);
}

}  // namespace orcs
