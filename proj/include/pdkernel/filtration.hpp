#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <ostream>
#include <vector>

#include "geometry.hpp"
#include "miniball.hpp"

namespace pdk {

enum class complex_kind { cech, rips };

inline constexpr int max_simplex_vertices = 5;

struct simplex {
    std::array<int, max_simplex_vertices> vertices{};  // strictly increasing, first dim+1 used
    int dim = 0;
    double value = 0.0;

    std::span<const int> vertex_span() const { return {vertices.data(), static_cast<std::size_t>(dim + 1)}; }
};

enum class tie_break { lexicographic, reverse_lexicographic };

inline bool filtration_less(const simplex& a, const simplex& b, tie_break rule = tie_break::lexicographic) {
    if (a.value != b.value) return a.value < b.value;
    if (a.dim != b.dim) return a.dim < b.dim;
    const auto va = a.vertex_span(), vb = b.vertex_span();
    if (rule == tie_break::lexicographic) return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
    return std::lexicographical_compare(vb.begin(), vb.end(), va.begin(), va.end());
}

struct filtered_complex {
    std::vector<simplex> simplices;  // in filtration order
    int n_vertices = 0;
    complex_kind kind = complex_kind::cech;
    int q_max = 1;
    double r_max = 0.0;
};

inline void sort_filtration(filtered_complex& fc, tie_break rule = tie_break::lexicographic) {
    std::sort(fc.simplices.begin(), fc.simplices.end(),
              [rule](const simplex& a, const simplex& b) { return filtration_less(a, b, rule); });
}

namespace detail {

inline double resolve_rmax(const point_cloud& x, double r_max) {
    if (std::isnan(r_max)) return std::max(diameter(x), std::numeric_limits<double>::min());
    require(r_max > 0.0, "r_max must be positive");
    return r_max;
}

// Edge table shared by both builders: radius[i*n+j] for i<j, negative when above r_max.
struct edge_table {
    int n;
    std::vector<double> radius;
    bool present(int i, int j) const { return radius[static_cast<std::size_t>(i) * n + j] >= 0.0; }
    double at(int i, int j) const { return radius[static_cast<std::size_t>(i) * n + j]; }
};

inline edge_table make_edges(const point_cloud& x, double r_max) {
    const int n = static_cast<int>(x.size());
    edge_table t{n, std::vector<double>(static_cast<std::size_t>(n) * n, -1.0)};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = edge_radius(x.points[i], x.points[j]);
            if (v <= r_max) t.radius[static_cast<std::size_t>(i) * n + j] = t.radius[static_cast<std::size_t>(j) * n + i] = v;
        }
    return t;
}

inline simplex make_simplex(std::span<const int> verts, double value) {
    simplex s;
    s.dim = static_cast<int>(verts.size()) - 1;
    std::copy(verts.begin(), verts.end(), s.vertices.begin());
    s.value = value;
    return s;
}

// Enumerates cliques of the edge graph in increasing vertex order, up to `max_vertices`.
template <class Visit>
void for_each_clique(const edge_table& edges, int max_vertices, std::vector<int>& current, Visit&& visit) {
    visit(std::span<const int>(current));
    if (static_cast<int>(current.size()) == max_vertices) return;
    const int start = current.empty() ? 0 : current.back() + 1;
    for (int v = start; v < edges.n; ++v) {
        bool adjacent = true;
        for (int u : current)
            if (!edges.present(u, v)) { adjacent = false; break; }
        if (!adjacent) continue;
        current.push_back(v);
        for_each_clique(edges, max_vertices, current, visit);
        current.pop_back();
    }
}

}  // namespace detail

// Cech filtration: each simplex enters at the radius of the minimal ball enclosing its
// vertices. Holds all simplices up to dimension q_max + 1 with value <= r_max (NaN: diameter).
inline filtered_complex build_cech(const point_cloud& x, int q_max = 1,
                                   double r_max = std::numeric_limits<double>::quiet_NaN()) {
    validate(x);
    require(!x.empty(), "filtration of an empty point cloud");
    require(q_max >= 0 && q_max <= 2, "Cech filtration supports q_max in {0, 1, 2}");
    filtered_complex fc;
    fc.kind = complex_kind::cech;
    fc.q_max = q_max;
    fc.n_vertices = static_cast<int>(x.size());
    fc.r_max = detail::resolve_rmax(x, r_max);
    const auto edges = detail::make_edges(x, fc.r_max);
    const auto& p = x.points;

    auto tri = [&](int i, int j, int k) { return triangle_radius(p[i], p[j], p[k]); };
    std::vector<int> current;
    detail::for_each_clique(edges, q_max + 2, current, [&](std::span<const int> v) {
        double value = 0.0;
        switch (v.size()) {
        case 0: return;
        case 1: value = 0.0; break;
        case 2: value = edges.at(v[0], v[1]); break;
        case 3: value = tri(v[0], v[1], v[2]); break;
        case 4: {
            const std::array<point3, 4> pts{p[v[0]], p[v[1]], p[v[2]], p[v[3]]};
            value = std::max({minimal_enclosing_ball(pts).radius, tri(v[0], v[1], v[2]), tri(v[0], v[1], v[3]),
                              tri(v[0], v[2], v[3]), tri(v[1], v[2], v[3])});
            break;
        }
        }
        if (value <= fc.r_max) fc.simplices.push_back(detail::make_simplex(v, value));
    });
    sort_filtration(fc);
    return fc;
}

// Vietoris-Rips filtration under the convention d(x_i, x_j) <= 2a: a simplex enters at half
// its diameter.
inline filtered_complex build_rips(const point_cloud& x, int q_max = 1,
                                   double r_max = std::numeric_limits<double>::quiet_NaN()) {
    validate(x);
    require(!x.empty(), "filtration of an empty point cloud");
    require(q_max >= 0 && q_max <= max_simplex_vertices - 2, "Rips filtration supports q_max in {0, ..., 3}");
    filtered_complex fc;
    fc.kind = complex_kind::rips;
    fc.q_max = q_max;
    fc.n_vertices = static_cast<int>(x.size());
    fc.r_max = detail::resolve_rmax(x, r_max);
    const auto edges = detail::make_edges(x, fc.r_max);
    std::vector<int> current;
    detail::for_each_clique(edges, q_max + 2, current, [&](std::span<const int> v) {
        if (v.empty()) return;
        double value = 0.0;
        for (std::size_t a = 0; a < v.size(); ++a)
            for (std::size_t b = a + 1; b < v.size(); ++b) value = std::max(value, edges.at(v[a], v[b]));
        fc.simplices.push_back(detail::make_simplex(v, value));
    });
    sort_filtration(fc);
    return fc;
}

// Debug dump, one simplex per line: `value dim v0 v1 ...`.
inline void write_complex(std::ostream& out, const filtered_complex& fc) {
    for (const auto& s : fc.simplices) {
        out << format_real(s.value) << ' ' << s.dim;
        for (int v : s.vertex_span()) out << ' ' << v;
        out << '\n';
    }
}

}  // namespace pdk
