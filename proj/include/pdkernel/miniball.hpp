#pragma once

#include <array>
#include <cmath>
#include <span>

#include "geometry.hpp"

namespace pdk {

struct ball {
    point3 center{0.0, 0.0, 0.0};
    double radius = -1.0;  // negative: empty ball

    bool contains(const point3& p) const {
        if (radius < 0.0) return false;
        const double d = distance(center, p);
        return d <= radius * (1.0 + 1e-12) + 1e-15;
    }
};

namespace detail {

inline point3 sub(const point3& a, const point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline double dot(const point3& a, const point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline point3 cross(const point3& a, const point3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline ball pair_ball(const point3& a, const point3& b) {
    return {{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])}, 0.5 * distance(a, b)};
}

// Smallest ball with all of `support` on its boundary, within their affine hull.
// Returns an empty ball when the support is affinely degenerate.
inline ball circumball(std::span<const point3> support) {
    switch (support.size()) {
    case 0: return {};
    case 1: return {support[0], 0.0};
    case 2: return pair_ball(support[0], support[1]);
    case 3: {
        const point3 u = sub(support[1], support[0]), v = sub(support[2], support[0]);
        const point3 w = cross(u, v);
        const double w2 = dot(w, w);
        if (w2 <= 1e-24 * dot(u, u) * dot(v, v)) return {};
        const point3 a = cross(w, u), b = cross(v, w);
        const double su = dot(u, u), sv = dot(v, v);
        point3 off{(sv * a[0] + su * b[0]) / (2.0 * w2), (sv * a[1] + su * b[1]) / (2.0 * w2),
                   (sv * a[2] + su * b[2]) / (2.0 * w2)};
        return {{support[0][0] + off[0], support[0][1] + off[1], support[0][2] + off[2]},
                std::sqrt(dot(off, off))};
    }
    case 4: {
        // 2 (p_i - p_0) . c = |p_i - p_0|^2, solved by Cramer's rule.
        std::array<point3, 3> rows;
        std::array<double, 3> rhs;
        for (int i = 0; i < 3; ++i) {
            rows[i] = sub(support[i + 1], support[0]);
            rhs[i] = 0.5 * dot(rows[i], rows[i]);
        }
        const double det = dot(rows[0], cross(rows[1], rows[2]));
        const double scale = std::sqrt(dot(rows[0], rows[0]) * dot(rows[1], rows[1]) * dot(rows[2], rows[2]));
        if (std::abs(det) <= 1e-12 * scale) return {};
        const point3 c12 = cross(rows[1], rows[2]), c20 = cross(rows[2], rows[0]), c01 = cross(rows[0], rows[1]);
        point3 off;
        for (int k = 0; k < 3; ++k) off[k] = (rhs[0] * c12[k] + rhs[1] * c20[k] + rhs[2] * c01[k]) / det;
        return {{support[0][0] + off[0], support[0][1] + off[1], support[0][2] + off[2]}, std::sqrt(dot(off, off))};
    }
    default: return {};
    }
}

inline ball welzl(std::span<const point3> points, std::size_t n, std::array<point3, 4>& support, std::size_t n_support) {
    if (n == 0 || n_support == 4) {
        ball b = circumball(std::span<const point3>(support.data(), n_support));
        if (b.radius < 0.0 && n_support >= 3) {
            // Degenerate support: fall back to the widest pair, which then encloses the rest.
            b = pair_ball(support[0], support[1]);
            for (std::size_t i = 0; i < n_support; ++i)
                for (std::size_t j = i + 1; j < n_support; ++j) {
                    ball c = pair_ball(support[i], support[j]);
                    if (c.radius > b.radius) b = c;
                }
        }
        return b;
    }
    ball b = welzl(points, n - 1, support, n_support);
    if (b.contains(points[n - 1])) return b;
    support[n_support] = points[n - 1];
    return welzl(points, n - 1, support, n_support + 1);
}

}  // namespace detail

// Minimal enclosing ball of up to four points in R^3 (Welzl's recursion).
inline ball minimal_enclosing_ball(std::span<const point3> points) {
    require(points.size() <= 4, "minimal_enclosing_ball supports at most 4 points");
    std::array<point3, 4> support{};
    return detail::welzl(points, points.size(), support, 0);
}

// Filtration value of an edge in the ball model: half the length.
inline double edge_radius(const point3& a, const point3& b) { return 0.5 * distance(a, b); }

// Miniball radius of a triangle from its side lengths and squared lengths (sides ab, bc, ca).
// Obtuse and right triangles are enclosed by the ball on their longest side; acute ones by
// their circumcircle, with the area taken from Kahan's stable form of Heron's formula.
inline double triangle_radius(double ab, double bc, double ca, double ab2, double bc2, double ca2) {
    if (ab2 >= bc2 + ca2) return 0.5 * ab;
    if (bc2 >= ab2 + ca2) return 0.5 * bc;
    if (ca2 >= ab2 + bc2) return 0.5 * ca;
    double a = ab, b = bc, c = ca;
    if (a < b) std::swap(a, b);
    if (a < c) std::swap(a, c);
    if (b < c) std::swap(b, c);
    const double area4 = std::sqrt((a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c)));
    return std::max(ab * bc * ca / area4, 0.5 * std::max({ab, bc, ca}));
}

inline double triangle_radius(const point3& a, const point3& b, const point3& c) {
    const double ab2 = squared_distance(a, b), bc2 = squared_distance(b, c), ca2 = squared_distance(c, a);
    return triangle_radius(std::sqrt(ab2), std::sqrt(bc2), std::sqrt(ca2), ab2, bc2, ca2);
}

}  // namespace pdk
