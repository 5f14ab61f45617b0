#pragma once

#include <Eigen/Dense>
#include <vector>

#include "common.hpp"

namespace pdk {

struct kfdr_curve {
    std::vector<double> values;  // values[l - 1] for split l = 1..n-1
    double gamma = 1e-3;
    int argmax = 0;              // 1-based split index
};

// KFDR statistic for the split after l samples:
//   l (n - l) / n * delta^T (S_w + gamma I)^-1 delta,
// delta the difference of segment means and S_w the pooled within-segment covariance
// (segment covariances weighted by l/n and (n-l)/n). With Phi the sample features,
// S_w = Phi P Phi^T / n for the block-centering projection P and delta = Phi m, so
//   delta^T (S_w + gamma I)^-1 delta = (m^T K m - m^T K P (n gamma I + P K P)^-1 P K m) / gamma.
inline double kfdr_at(const Eigen::MatrixXd& k, int l, double gamma) {
    const int n = static_cast<int>(k.rows());
    require(l >= 1 && l < n, "KFDR split must lie in 1..n-1");
    Eigen::VectorXd m(n);
    for (int i = 0; i < n; ++i) m(i) = i < l ? -1.0 / l : 1.0 / (n - l);
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
    p.topLeftCorner(l, l).array() -= 1.0 / l;
    p.bottomRightCorner(n - l, n - l).array() -= 1.0 / (n - l);

    const Eigen::VectorXd km = k * m;
    const Eigen::VectorXd pkm = p * km;
    const Eigen::MatrixXd pkp = p * k * p;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (pkp + pkp.transpose()));
    const Eigen::VectorXd proj = eig.eigenvectors().transpose() * pkm;
    double correction = 0.0;
    for (int i = 0; i < n; ++i) {
        // Negative eigenvalues can only come from round-off or an approximate Gram matrix.
        const double lambda = std::max(0.0, eig.eigenvalues()(i));
        correction += proj(i) * proj(i) / (n * gamma + lambda);
    }
    const double q = (m.dot(km) - correction) / gamma;
    return static_cast<double>(l) * (n - l) / n * std::max(0.0, q);
}

inline kfdr_curve kfdr(const Eigen::MatrixXd& k, double gamma = 1e-3) {
    const int n = static_cast<int>(k.rows());
    require(k.rows() == k.cols(), "KFDR needs a square Gram matrix");
    require(n >= 3, "KFDR needs at least three samples");
    require(gamma > 0.0 && std::isfinite(gamma), "KFDR needs gamma > 0");
    require(k.allFinite(), "Gram matrix has non-finite entries");
    kfdr_curve c;
    c.gamma = gamma;
    c.values.resize(n - 1);
    for (int l = 1; l < n; ++l) c.values[l - 1] = kfdr_at(k, l, gamma);
    int best = 0;
    for (int i = 1; i < n - 1; ++i)
        if (c.values[i] > c.values[best]) best = i;
    c.argmax = best + 1;
    return c;
}

}  // namespace pdk
