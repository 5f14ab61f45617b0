#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "matching.hpp"
#include "persistence.hpp"

namespace pdk {

// Diagonal-augmented cost matrix. Rows: points of D, then one diagonal slot per point of E.
// Columns: points of E, then one diagonal slot per point of D. A point may go to its own
// diagonal slot at cost pers/2 (the sup-norm distance to the diagonal); slot-to-slot is free.
struct matching_problem {
    std::size_t size = 0;
    std::vector<double> costs;  // row-major, +inf for forbidden pairs

    double at(std::size_t i, std::size_t j) const { return costs[i * size + j]; }
};

inline double linf(const persistence_pair& x, const persistence_pair& y) {
    return std::max(std::abs(x.birth - y.birth), std::abs(x.death - y.death));
}

inline double diagonal_distance(const persistence_pair& x) { return 0.5 * (x.death - x.birth); }

inline matching_problem make_matching_problem(const persistence_diagram& d, const persistence_diagram& e) {
    const std::size_t m1 = d.size(), m2 = e.size(), n = m1 + m2;
    const double inf = std::numeric_limits<double>::infinity();
    matching_problem mp;
    mp.size = n;
    mp.costs.assign(n * n, inf);
    for (std::size_t i = 0; i < m1; ++i) {
        for (std::size_t j = 0; j < m2; ++j) mp.costs[i * n + j] = linf(d.pairs[i], e.pairs[j]);
        mp.costs[i * n + m2 + i] = diagonal_distance(d.pairs[i]);
    }
    for (std::size_t k = 0; k < m2; ++k) {
        mp.costs[(m1 + k) * n + k] = diagonal_distance(e.pairs[k]);
        for (std::size_t l = 0; l < m1; ++l) mp.costs[(m1 + k) * n + m2 + l] = 0.0;
    }
    return mp;
}

// Bottleneck distance: the smallest candidate cost admitting a perfect matching.
inline double bottleneck_distance(const persistence_diagram& d, const persistence_diagram& e) {
    require(d.q == e.q, "bottleneck distance between diagrams of different dimension");
    const auto mp = make_matching_problem(d, e);
    if (mp.size == 0) return 0.0;
    std::vector<double> candidates;
    candidates.reserve(mp.costs.size());
    for (double c : mp.costs)
        if (std::isfinite(c)) candidates.push_back(c);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::size_t lo = 0, hi = candidates.size() - 1;  // candidates[hi] is always feasible
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const double theta = candidates[mid];
        const std::size_t matched =
            hopcroft_karp(mp.size, [&](std::size_t i, std::size_t j) { return mp.at(i, j) <= theta; });
        if (matched == mp.size) hi = mid;
        else lo = mid + 1;
    }
    return candidates[lo];
}

// p-Wasserstein distance with sup-norm ground cost; p = +inf gives the bottleneck distance.
inline double wasserstein_distance(const persistence_diagram& d, const persistence_diagram& e, double p) {
    require(d.q == e.q, "Wasserstein distance between diagrams of different dimension");
    require(p >= 1.0, "Wasserstein distance needs p >= 1");
    if (std::isinf(p)) return bottleneck_distance(d, e);
    const auto mp = make_matching_problem(d, e);
    if (mp.size == 0) return 0.0;
    std::vector<double> cost(mp.costs.size());
    double finite_total = 0.0;
    for (std::size_t k = 0; k < cost.size(); ++k) {
        if (std::isfinite(mp.costs[k])) {
            cost[k] = std::pow(mp.costs[k], p);
            finite_total += cost[k];
        }
    }
    // Forbidden pairs get a cost no optimal assignment would pay.
    const double forbidden = 2.0 * finite_total + 1.0;
    for (std::size_t k = 0; k < cost.size(); ++k)
        if (!std::isfinite(mp.costs[k])) cost[k] = forbidden;
    const auto a = hungarian(cost, mp.size);
    double sum = 0.0;
    for (std::size_t i = 0; i < mp.size; ++i) sum += cost[i * mp.size + a.row_to_col[i]];
    return std::pow(sum, 1.0 / p);
}

}  // namespace pdk
