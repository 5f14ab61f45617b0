#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "common.hpp"

namespace pdk {

struct kpca_embedding {
    Eigen::MatrixXd scores;            // n x k
    std::vector<double> eigenvalues;   // k, descending
    std::vector<double> contribution;  // cumulative explained-variance ratios, k
};

inline Eigen::MatrixXd double_center(const Eigen::MatrixXd& g) {
    const Eigen::VectorXd row_mean = g.rowwise().mean();
    const Eigen::VectorXd col_mean = g.colwise().mean().transpose();
    const double total = g.mean();
    Eigen::MatrixXd c = g;
    c.colwise() -= row_mean;
    c.rowwise() -= col_mean.transpose();
    c.array() += total;
    return 0.5 * (c + c.transpose());
}

// Kernel PCA: eigendecomposition of the double-centered Gram matrix, scores scaled by
// sqrt(eigenvalue). Eigenvalues below 1e-12 trace count as zero.
inline kpca_embedding kpca(const Eigen::MatrixXd& g, int k) {
    const int n = static_cast<int>(g.rows());
    require(g.rows() == g.cols(), "KPCA needs a square Gram matrix");
    require(k >= 1 && k < n, "KPCA needs 1 <= k < n");
    require(g.allFinite(), "Gram matrix has non-finite entries");
    const Eigen::MatrixXd c = double_center(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
    const Eigen::VectorXd& vals = eig.eigenvalues();  // ascending
    const double cutoff = 1e-12 * std::abs(c.trace());
    double positive_total = 0.0;
    for (int i = 0; i < n; ++i)
        if (vals(i) > cutoff) positive_total += vals(i);

    kpca_embedding out;
    out.scores.resize(n, k);
    double running = 0.0;
    for (int a = 0; a < k; ++a) {
        const int idx = n - 1 - a;
        const double lambda = vals(idx) > cutoff ? vals(idx) : 0.0;
        out.eigenvalues.push_back(vals(idx));
        running += lambda;
        out.contribution.push_back(positive_total > 0.0 ? running / positive_total : 0.0);
        out.scores.col(a) = eig.eigenvectors().col(idx) * std::sqrt(lambda);
    }
    return out;
}

}  // namespace pdk
