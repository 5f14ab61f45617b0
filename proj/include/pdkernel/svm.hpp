#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "common.hpp"

namespace pdk {

struct svm_model {
    std::vector<double> alpha;         // dual coefficients in [0, C]
    std::vector<int> labels;           // training labels, +-1
    std::vector<std::size_t> support;  // indices with alpha > 0
    double bias = 0.0;                 // decision = sum_i alpha_i y_i K(x_i, .) + bias
    double c = 1.0;
    int iterations = 0;
    double objective = 0.0;            // dual objective sum(alpha) - alpha^T Q alpha / 2
};

// Clips negative eigenvalues to zero.
inline Eigen::MatrixXd project_psd(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (g + g.transpose()));
    const Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

inline void check_svm_labels(const std::vector<int>& y) {
    bool pos = false, neg = false;
    for (int v : y) {
        require(v == 1 || v == -1, "SVM labels must be +1 or -1");
        (v == 1 ? pos : neg) = true;
    }
    require(pos && neg, "SVM training needs both classes");
}

// C-SVM dual on a precomputed kernel by SMO with second-order working-set selection.
// Stops when the maximal KKT violation m(alpha) - M(alpha) drops below tol.
inline svm_model svm_train(const Eigen::MatrixXd& k, const std::vector<int>& y, double c, double tol = 1e-3) {
    const int n = static_cast<int>(k.rows());
    require(k.rows() == k.cols(), "SVM needs a square Gram matrix");
    require(static_cast<int>(y.size()) == n, "SVM label count does not match the Gram matrix");
    require(c > 0.0 && std::isfinite(c), "SVM needs C > 0");
    require(k.allFinite(), "Gram matrix has non-finite entries");
    check_svm_labels(y);

    std::vector<double> alpha(n, 0.0), grad(n, -1.0);  // grad of alpha^T Q alpha / 2 - sum(alpha)
    auto q = [&](int i, int j) { return y[i] * y[j] * k(i, j); };
    auto in_up = [&](int t) { return (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0); };
    auto in_low = [&](int t) { return (y[t] == 1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < c); };
    constexpr double tau = 1e-12;
    const long max_iter = std::max<long>(10'000'000L, 100L * n * n);

    svm_model model;
    model.c = c;
    long iter = 0;
    for (; iter < max_iter; ++iter) {
        int i = -1;
        double gmax = -std::numeric_limits<double>::infinity();
        for (int t = 0; t < n; ++t)
            if (in_up(t) && -y[t] * grad[t] > gmax) {
                gmax = -y[t] * grad[t];
                i = t;
            }
        int j = -1;
        double gmin = std::numeric_limits<double>::infinity(), best = std::numeric_limits<double>::infinity();
        for (int t = 0; t < n; ++t) {
            if (!in_low(t)) continue;
            const double v = -y[t] * grad[t];
            gmin = std::min(gmin, v);
            if (i < 0) continue;
            const double b = gmax - v;
            if (b > 0.0) {
                double a = k(i, i) + k(t, t) - 2.0 * k(i, t);
                if (a <= 0.0) a = tau;
                if (-(b * b) / a < best) {
                    best = -(b * b) / a;
                    j = t;
                }
            }
        }
        if (i < 0 || j < 0 || gmax - gmin < tol) break;

        const double old_ai = alpha[i], old_aj = alpha[j];
        double a = k(i, i) + k(j, j) - 2.0 * k(i, j);
        if (a <= 0.0) a = tau;
        if (y[i] != y[j]) {
            const double delta = (-grad[i] - grad[j]) / a;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0 && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = diff;
            } else if (diff <= 0.0 && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0 && alpha[i] > c) {
                alpha[i] = c;
                alpha[j] = c - diff;
            } else if (diff <= 0.0 && alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            const double delta = (grad[i] - grad[j]) / a;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c && alpha[i] > c) {
                alpha[i] = c;
                alpha[j] = sum - c;
            } else if (sum <= c && alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c && alpha[j] > c) {
                alpha[j] = c;
                alpha[i] = sum - c;
            } else if (sum <= c && alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_ai, dj = alpha[j] - old_aj;
        for (int t = 0; t < n; ++t) grad[t] += q(t, i) * di + q(t, j) * dj;
    }
    if (iter == max_iter) throw numerical_error("SVM solver did not converge");

    // Bias from free support vectors, else the midpoint of the feasible interval.
    double free_sum = 0.0, ub = std::numeric_limits<double>::infinity(), lb = -ub;
    int free_count = 0;
    for (int t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] > 0.0 && alpha[t] < c) {
            free_sum += yg;
            ++free_count;
        } else if ((alpha[t] >= c && y[t] == -1) || (alpha[t] <= 0.0 && y[t] == 1)) {
            ub = std::min(ub, yg);
        } else {
            lb = std::max(lb, yg);
        }
    }
    const double rho = free_count ? free_sum / free_count : 0.5 * (ub + lb);

    model.alpha = alpha;
    model.labels = y;
    model.bias = -rho;
    model.iterations = static_cast<int>(iter);
    double obj = 0.0;
    for (int t = 0; t < n; ++t) {
        obj += alpha[t] - 0.5 * alpha[t] * (grad[t] + 1.0);
        if (alpha[t] > 0.0) model.support.push_back(static_cast<std::size_t>(t));
    }
    model.objective = obj;
    return model;
}

// Decision values for rows of a cross-kernel matrix (test x train).
inline std::vector<double> svm_decision(const svm_model& m, const Eigen::MatrixXd& cross) {
    require(cross.cols() == static_cast<Eigen::Index>(m.alpha.size()), "cross Gram columns must match the training set");
    std::vector<double> out(static_cast<std::size_t>(cross.rows()));
    for (Eigen::Index r = 0; r < cross.rows(); ++r) {
        double s = m.bias;
        for (std::size_t t : m.support) s += m.alpha[t] * m.labels[t] * cross(r, static_cast<Eigen::Index>(t));
        out[static_cast<std::size_t>(r)] = s;
    }
    return out;
}

inline std::vector<int> svm_predict(const svm_model& m, const Eigen::MatrixXd& cross) {
    std::vector<int> out;
    for (double v : svm_decision(m, cross)) out.push_back(v >= 0.0 ? 1 : -1);
    return out;
}

}  // namespace pdk
