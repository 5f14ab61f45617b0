#pragma once

#include <limits>
#include <queue>
#include <vector>

#include "common.hpp"

namespace pdk {

// Maximum bipartite matching on an n x n graph. `allowed(i, j)` tells whether left i may be
// matched to right j. Returns the matching size.
template <class Allowed>
std::size_t hopcroft_karp(std::size_t n, Allowed&& allowed) {
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (allowed(i, j)) adj[i].push_back(j);

    std::vector<std::size_t> match_left(n, none), match_right(n, none), dist(n);
    auto bfs = [&] {
        std::queue<std::size_t> q;
        bool found = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (match_left[i] == none) {
                dist[i] = 0;
                q.push(i);
            } else {
                dist[i] = none;
            }
        }
        while (!q.empty()) {
            const std::size_t i = q.front();
            q.pop();
            for (std::size_t j : adj[i]) {
                const std::size_t k = match_right[j];
                if (k == none) found = true;
                else if (dist[k] == none) {
                    dist[k] = dist[i] + 1;
                    q.push(k);
                }
            }
        }
        return found;
    };
    std::vector<std::size_t> cursor(n);
    auto dfs = [&](auto&& self, std::size_t i) -> bool {
        for (std::size_t& c = cursor[i]; c < adj[i].size(); ++c) {
            const std::size_t j = adj[i][c];
            const std::size_t k = match_right[j];
            if (k == none || (dist[k] == dist[i] + 1 && self(self, k))) {
                match_left[i] = j;
                match_right[j] = i;
                ++c;
                return true;
            }
        }
        dist[i] = none;
        return false;
    };
    std::size_t size = 0;
    while (bfs()) {
        std::fill(cursor.begin(), cursor.end(), 0);
        for (std::size_t i = 0; i < n; ++i)
            if (match_left[i] == none && dfs(dfs, i)) ++size;
    }
    return size;
}

struct assignment {
    std::vector<std::size_t> row_to_col;
    double cost = 0.0;
};

// Minimum-cost perfect matching on a square cost matrix (row-major), Hungarian method with
// potentials, O(n^3). Entries must be finite.
inline assignment hungarian(const std::vector<double>& cost, std::size_t n) {
    require(cost.size() == n * n, "hungarian: cost matrix must be n x n");
    assignment out;
    out.row_to_col.assign(n, 0);
    if (n == 0) return out;
    const double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays with a virtual column 0.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<char> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    for (std::size_t j = 1; j <= n; ++j) out.row_to_col[p[j] - 1] = j - 1;
    for (std::size_t i = 0; i < n; ++i) out.cost += cost[i * n + out.row_to_col[i]];
    return out;
}

}  // namespace pdk
