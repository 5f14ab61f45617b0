#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <vector>

#include "common.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "svm.hpp"

namespace pdk {

// Fold index per sample: each class is shuffled with the seed and dealt round-robin.
inline std::vector<int> stratified_folds(const std::vector<int>& labels, int folds, std::uint64_t seed) {
    require(folds >= 2, "cross-validation needs at least two folds");
    std::vector<int> fold(labels.size(), 0);
    std::vector<int> classes = labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    counter_rng rng(seed);
    int offset = 0;
    for (int cls : classes) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) idx.push_back(i);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t r = 0; r < idx.size(); ++r) fold[idx[r]] = static_cast<int>((r + offset) % folds);
        offset = static_cast<int>((offset + idx.size()) % folds);
    }
    return fold;
}

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& g, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                g(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c]));
    return out;
}

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    require(predicted.size() == truth.size() && !truth.empty(), "accuracy needs matching nonempty label lists");
    std::size_t hit = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hit += predicted[i] == truth[i];
    return static_cast<double>(hit) / static_cast<double>(truth.size());
}

// Trains on `train` and scores `test`, both index lists into a full Gram matrix.
inline double holdout_accuracy(const Eigen::MatrixXd& g, const std::vector<int>& y, const std::vector<std::size_t>& train,
                               const std::vector<std::size_t>& test, double c_svm) {
    std::vector<int> ytr, yte;
    for (auto i : train) ytr.push_back(y[i]);
    for (auto i : test) yte.push_back(y[i]);
    const auto model = svm_train(submatrix(g, train, train), ytr, c_svm);
    return accuracy(svm_predict(model, submatrix(g, test, train)), yte);
}

// Mean accuracy over stratified folds. A training split holding one class predicts that class.
inline double cv_accuracy(const Eigen::MatrixXd& g, const std::vector<int>& y, const std::vector<int>& fold, int folds,
                          double c_svm) {
    std::size_t hit = 0;
    for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < y.size(); ++i) (fold[i] == f ? test : train).push_back(i);
        if (test.empty()) continue;
        std::vector<int> ytr;
        for (auto i : train) ytr.push_back(y[i]);
        std::vector<int> pred;
        if (std::all_of(ytr.begin(), ytr.end(), [&](int v) { return v == ytr.front(); })) {
            pred.assign(test.size(), ytr.front());
        } else {
            const auto model = svm_train(submatrix(g, train, train), ytr, c_svm);
            pred = svm_predict(model, submatrix(g, test, train));
        }
        for (std::size_t r = 0; r < test.size(); ++r) hit += pred[r] == y[test[r]];
    }
    return static_cast<double>(hit) / static_cast<double>(y.size());
}

struct cv_choice {
    std::size_t gram_index = 0;  // position in the candidate Gram list
    double c_svm = 1.0;
    double accuracy = 0.0;
};

// Grid search over candidate Gram matrices (one per kernel parameter setting) and SVM C.
// Ties go to the earliest grid point.
inline cv_choice cross_validate(const std::vector<Eigen::MatrixXd>& grams, const std::vector<int>& y,
                                const std::vector<double>& c_grid, int folds, std::uint64_t seed) {
    require(!grams.empty() && !c_grid.empty(), "cross-validation needs a nonempty grid");
    check_svm_labels(y);
    const auto fold = stratified_folds(y, folds, seed);
    const std::size_t points = grams.size() * c_grid.size();
    std::vector<double> acc(points);
    parallel_for(points, [&](std::size_t p) {
        acc[p] = cv_accuracy(grams[p / c_grid.size()], y, fold, folds, c_grid[p % c_grid.size()]);
    });
    const std::size_t best = static_cast<std::size_t>(std::max_element(acc.begin(), acc.end()) - acc.begin());
    return {best / c_grid.size(), c_grid[best % c_grid.size()], acc[best]};
}

}  // namespace pdk
