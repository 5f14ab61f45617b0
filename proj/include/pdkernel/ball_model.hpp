#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "filtration.hpp"
#include "persistence.hpp"

namespace pdk {

// Persistence in dimensions 0 and 1 without materialising the complex: union-find for H0 and
// an implicit coboundary reduction (persistent cohomology) for H1. Filtration values and the
// tie-break order match build_cech / build_rips exactly, so the diagrams agree with
// compute_persistence on the explicit complex while scaling to clouds with ~10^3 points.
class implicit_persistence {
public:
    implicit_persistence(const point_cloud& x, complex_kind kind = complex_kind::cech,
                         double r_max = std::numeric_limits<double>::quiet_NaN())
        : kind_(kind), n_(static_cast<int>(x.size())) {
        validate(x);
        require(!x.empty(), "filtration of an empty point cloud");
        r_max_ = detail::resolve_rmax(x, r_max);
        const std::size_t nn = static_cast<std::size_t>(n_) * n_;
        sq_.assign(nn, 0.0);
        len_.assign(nn, 0.0);
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) {
                const double d2 = squared_distance(x.points[i], x.points[j]);
                sq_[idx(i, j)] = sq_[idx(j, i)] = d2;
                len_[idx(i, j)] = len_[idx(j, i)] = std::sqrt(d2);
            }
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (edge_value(i, j) <= r_max_) edges_.push_back({edge_value(i, j), i, j});
        std::sort(edges_.begin(), edges_.end());
        complete_ = edges_.size() == static_cast<std::size_t>(n_) * (n_ - 1) / 2;
    }

    persistence_diagram diagram(int q) {
        require(q == 0 || q == 1, "implicit persistence supports q in {0, 1}");
        if (!h0_done_) compute_h0();
        if (q == 0) return h0_;
        if (!h1_done_) compute_h1();
        return h1_;
    }

    double r_max() const { return r_max_; }

    // Column additions after which the H1 reduction switches to its dense working column.
    void set_dense_switch(std::size_t additions) { dense_switch_ = additions; }

private:
    struct edge {
        double value;
        int i, j;
        friend auto operator<=>(const edge&, const edge&) = default;
    };
    struct triangle {
        double value;
        std::uint64_t key;  // ((i * n) + j) * n + k on sorted vertices
        friend auto operator<=>(const triangle&, const triangle&) = default;
    };

    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }
    // Same expression as edge_radius: half of sqrt(squared distance).
    double edge_value(int i, int j) const { return 0.5 * len_[idx(i, j)]; }

    double triangle_value(int i, int j, int k) const {
        if (kind_ == complex_kind::rips) return std::max({edge_value(i, j), edge_value(i, k), edge_value(j, k)});
        return triangle_radius(len_[idx(i, j)], len_[idx(j, k)], len_[idx(k, i)], sq_[idx(i, j)], sq_[idx(j, k)],
                               sq_[idx(k, i)]);
    }

    triangle make_triangle(int a, int b, int c) const {
        int v[3] = {a, b, c};
        std::sort(v, v + 3);
        const std::uint64_t n = static_cast<std::uint64_t>(n_);
        return {triangle_value(v[0], v[1], v[2]), (static_cast<std::uint64_t>(v[0]) * n + v[1]) * n + v[2]};
    }

    bool edge_present(int i, int j) const { return edge_value(i, j) <= r_max_; }

    template <class Visit>
    void for_each_coface(int i, int j, Visit&& visit) const {
        for (int k = 0; k < n_; ++k) {
            if (k == i || k == j || !edge_present(i, k) || !edge_present(j, k)) continue;
            const triangle t = make_triangle(i, j, k);
            if (t.value <= r_max_) visit(t);
        }
    }

    // Cofaces are scanned with k ascending, which is ascending key order. No coface can enter
    // before the edge itself, so the first one at the edge value is the minimum.
    std::optional<triangle> minimal_coface(const edge& ed) const {
        std::optional<triangle> best;
        for (int k = 0; k < n_; ++k) {
            if (k == ed.i || k == ed.j || (!complete_ && (!edge_present(ed.i, k) || !edge_present(ed.j, k)))) continue;
            const triangle t = make_triangle(ed.i, ed.j, k);
            if (t.value > r_max_) continue;
            if (!best || t < *best) best = t;
            if (t.value == ed.value) break;
        }
        return best;
    }

    std::size_t dense_switch_ = 256;

    bool choose3_fits() const {
        const std::uint64_t n = static_cast<std::uint64_t>(n_);
        return n * (n - 1) * (n - 2) / 6 < (std::uint64_t{1} << 32);
    }

    // Rank of a sorted triple among all triples of [0, n).
    std::uint64_t triple_rank(int a, int b, int c) const { return choose3_[c] + choose2_[b] + a; }

    triangle triple_at(std::uint64_t r) const {
        const int c = static_cast<int>(std::upper_bound(choose3_.begin(), choose3_.end(), r) - choose3_.begin()) - 1;
        r -= choose3_[c];
        const int b = static_cast<int>(std::upper_bound(choose2_.begin(), choose2_.begin() + c, r) - choose2_.begin()) - 1;
        return make_triangle(static_cast<int>(r - choose2_[b]), b, c);
    }

    // Continues the reduction of a column whose accumulated edge combination is `v`.
    // The working column is a parity bitset over all triples. Set entries wait in buckets
    // delimited by quantiles of the edge values and move into the heap one bucket at a time,
    // so each entry is ordered only once the pivot reaches its value range.
    std::optional<triangle> reduce_dense(std::vector<std::size_t>& v,
                                         const std::unordered_map<std::uint64_t, std::size_t>& owner,
                                         const std::vector<std::vector<std::size_t>>& reduction) {
        if (choose3_.empty()) {
            choose2_.resize(n_ + 1);
            choose3_.resize(n_ + 1);
            for (std::uint64_t m = 0; m <= static_cast<std::uint64_t>(n_); ++m) {
                choose2_[m] = m < 2 ? 0 : m * (m - 1) / 2;
                choose3_[m] = m < 3 ? 0 : m * (m - 1) * (m - 2) / 6;
            }
        }
        std::vector<std::uint64_t> bits((choose3_[n_] + 63) / 64, 0);

        const std::size_t n_groups = std::clamp<std::size_t>(edges_.size() / 16, 1, 4096);
        std::vector<double> upper(n_groups);
        for (std::size_t g = 0; g + 1 < n_groups; ++g) upper[g] = edges_[(g + 1) * edges_.size() / n_groups - 1].value;
        upper[n_groups - 1] = std::numeric_limits<double>::infinity();
        std::vector<std::vector<std::uint32_t>> buckets(n_groups);
        std::size_t current = 0;
        std::priority_queue<triangle, std::vector<triangle>, std::greater<>> low;

        auto bucket_of = [&](double value) {
            return static_cast<std::size_t>(std::lower_bound(upper.begin(), upper.end(), value) - upper.begin());
        };
        auto place = [&](const triangle& t, std::uint64_t r) {
            if (t.value > r_max_) return;
            if (t.value <= upper[current]) low.push(t);
            else buckets[bucket_of(t.value)].push_back(static_cast<std::uint32_t>(r));
        };
        auto toggle = [&](std::size_t f) {
            const int i = edges_[f].i, j = edges_[f].j;
            for (int k = 0; k < n_; ++k) {
                if (k == i || k == j || (!complete_ && (!edge_present(i, k) || !edge_present(j, k)))) continue;
                const int t[3] = {std::min(i, k), k < i ? i : std::min(j, k), std::max(j, k)};
                const std::uint64_t r = triple_rank(t[0], t[1], t[2]);
                const std::uint64_t mask = std::uint64_t{1} << (r & 63);
                bits[r >> 6] ^= mask;
                if (!(bits[r >> 6] & mask)) continue;
                // Every triangle enters no earlier than its longest edge.
                const double floor = 0.5 * std::max({len_[idx(i, j)], len_[idx(i, k)], len_[idx(j, k)]});
                if (floor > upper[current]) buckets[bucket_of(floor)].push_back(static_cast<std::uint32_t>(r));
                else place(make_triangle(t[0], t[1], t[2]), r);
            }
        };
        auto is_set = [&](std::uint64_t r) { return (bits[r >> 6] >> (r & 63)) & 1; };
        auto key_rank = [&](const triangle& t) {
            const std::uint64_t n = static_cast<std::uint64_t>(n_);
            return triple_rank(static_cast<int>(t.key / (n * n)), static_cast<int>((t.key / n) % n),
                               static_cast<int>(t.key % n));
        };
        auto next_pivot = [&]() -> std::optional<triangle> {
            for (;;) {
                while (!low.empty()) {
                    const triangle t = low.top();
                    low.pop();
                    while (!low.empty() && low.top().key == t.key) low.pop();
                    if (is_set(key_rank(t))) return t;
                }
                if (++current == n_groups) return std::nullopt;
                std::vector<std::uint32_t> waiting;
                waiting.swap(buckets[current]);
                std::sort(waiting.begin(), waiting.end());
                waiting.erase(std::unique(waiting.begin(), waiting.end()), waiting.end());
                for (std::uint64_t r : waiting)
                    if (is_set(r)) place(triple_at(r), r);
            }
        };

        for (std::size_t f : v) toggle(f);
        for (;;) {
            const auto pivot = next_pivot();
            if (!pivot) return std::nullopt;
            auto it = owner.find(pivot->key);
            if (it == owner.end()) return pivot;
            for (std::size_t f : reduction[it->second]) {
                v.push_back(f);
                toggle(f);
            }
        }
    }

    void compute_h0() {
        std::vector<int> parent(n_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        h0_.q = 0;
        tree_edge_.assign(edges_.size(), 0);
        int components = n_;
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            int a = find(edges_[e].i), b = find(edges_[e].j);
            if (a == b) continue;
            // Elder rule: the younger component (larger index among equal births) dies.
            if (a > b) std::swap(a, b);
            parent[b] = a;
            tree_edge_[e] = 1;
            --components;
            if (edges_[e].value > 0.0) h0_.pairs.push_back({0.0, edges_[e].value});
        }
        if (components > 1) throw essential_class_error(0, 0.0);
        h0_.normalize();
        h0_done_ = true;
    }

    void compute_h1() {
        h1_.q = 1;
        std::unordered_map<std::uint64_t, std::size_t> owner;  // pivot triangle -> reduced column
        std::vector<std::vector<std::size_t>> reduction;     // column -> edges summed into it
        std::priority_queue<triangle, std::vector<triangle>, std::greater<>> heap;

        auto pop_pivot = [&]() -> std::optional<triangle> {
            while (!heap.empty()) {
                const triangle t = heap.top();
                heap.pop();
                if (!heap.empty() && heap.top().key == t.key) {
                    heap.pop();  // Z/2 cancellation
                    continue;
                }
                return t;
            }
            return std::nullopt;
        };
        auto push_coboundary = [&](std::size_t e) {
            for_each_coface(edges_[e].i, edges_[e].j, [&](const triangle& t) { heap.push(t); });
        };

        for (std::size_t e = edges_.size(); e-- > 0;) {
            if (tree_edge_[e]) continue;
            const edge& ed = edges_[e];

            // Smallest coface first: if no column owns it the pair is immediate.
            std::optional<triangle> first = minimal_coface(ed);
            if (!first) throw essential_class_error(1, ed.value);
            if (!owner.contains(first->key)) {
                owner.emplace(first->key, reduction.size());
                reduction.push_back({e});
                if (ed.value < first->value) h1_.pairs.push_back({ed.value, first->value});
                continue;
            }

            heap = {};
            std::vector<std::size_t> v{e};
            push_coboundary(e);
            std::optional<triangle> pivot = pop_pivot();
            std::size_t additions = 0;
            while (pivot) {
                auto it = owner.find(pivot->key);
                if (it == owner.end()) break;
                if (++additions > dense_switch_ && choose3_fits()) {
                    // Long chain (typically the cocycle of a large loop): finish with a parity
                    // bitset so the working column stops accumulating cancelled heap entries.
                    heap = {};
                    pivot = reduce_dense(v, owner, reduction);
                    break;
                }
                heap.push(*pivot);
                for (std::size_t f : reduction[it->second]) {
                    v.push_back(f);
                    push_coboundary(f);
                }
                pivot = pop_pivot();
            }
            if (!pivot) throw essential_class_error(1, ed.value);
            // Keep the stored combination reduced mod 2.
            std::sort(v.begin(), v.end());
            std::vector<std::size_t> odd;
            for (std::size_t a = 0; a < v.size();) {
                std::size_t b = a;
                while (b < v.size() && v[b] == v[a]) ++b;
                if ((b - a) % 2) odd.push_back(v[a]);
                a = b;
            }
            owner.emplace(pivot->key, reduction.size());
            reduction.push_back(std::move(odd));
            if (ed.value < pivot->value) h1_.pairs.push_back({ed.value, pivot->value});
        }
        h1_.normalize();
        h1_done_ = true;
    }

    complex_kind kind_;
    int n_;
    double r_max_ = 0.0;
    std::vector<double> sq_, len_;
    std::vector<edge> edges_;
    std::vector<char> tree_edge_;
    std::vector<std::uint64_t> choose2_, choose3_;
    bool complete_ = false;  // every edge lies below r_max
    bool h0_done_ = false, h1_done_ = false;
    persistence_diagram h0_, h1_;
};

inline persistence_diagram fast_persistence(const point_cloud& x, int q, complex_kind kind = complex_kind::cech,
                                            double r_max = std::numeric_limits<double>::quiet_NaN()) {
    implicit_persistence ip(x, kind, r_max);
    return ip.diagram(q);
}

}  // namespace pdk
