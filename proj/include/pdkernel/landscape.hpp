#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "persistence.hpp"

namespace pdk {

struct landscape_point {
    double t = 0.0;
    double value = 0.0;
};

// Level k (0-based here, k + 1 in files) is the piecewise-linear function through its
// breakpoints, zero outside them. Levels beyond the stored ones are identically zero.
struct landscape {
    std::vector<std::vector<landscape_point>> levels;

    double operator()(std::size_t k, double t) const {
        if (k >= levels.size()) return 0.0;
        const auto& lv = levels[k];
        if (lv.empty() || t <= lv.front().t || t >= lv.back().t) return 0.0;
        auto hi = std::upper_bound(lv.begin(), lv.end(), t, [](double v, const landscape_point& p) { return v < p.t; });
        auto lo = hi - 1;
        const double h = hi->t - lo->t;
        if (h <= 0.0) return std::max(lo->value, hi->value);
        return lo->value + (hi->value - lo->value) * (t - lo->t) / h;
    }
};

inline double tent(const persistence_pair& x, double t) {
    return std::max(0.0, std::min(t - x.birth, x.death - t));
}

// Exact landscape. Between consecutive points of {b_i, d_i, (b_i + d_j)/2} every tent is
// linear and their order is fixed, so each level is linear there too.
inline landscape build_landscape(const persistence_diagram& d) {
    landscape out;
    const auto& x = d.pairs;
    const std::size_t m = x.size();
    if (m == 0) return out;

    std::vector<double> grid;
    grid.reserve(2 * m + m * m);
    for (const auto& a : x) {
        grid.push_back(a.birth);
        grid.push_back(a.death);
        for (const auto& b : x) {
            const double c = 0.5 * (a.birth + b.death);
            if (c > a.birth && c < b.death) grid.push_back(c);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<std::vector<double>> values(m, std::vector<double>(grid.size()));
    std::vector<double> col(m);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        for (std::size_t i = 0; i < m; ++i) col[i] = tent(x[i], grid[g]);
        std::sort(col.begin(), col.end(), std::greater<>());
        for (std::size_t k = 0; k < m; ++k) values[k][g] = col[k];
    }

    for (std::size_t k = 0; k < m; ++k) {
        const auto& v = values[k];
        std::size_t first = 0, last = grid.size();
        while (first < grid.size() && v[first] == 0.0) ++first;
        if (first == grid.size()) break;  // this and all deeper levels are zero
        while (v[last - 1] == 0.0) --last;
        // Keep the zero endpoints that bound the support.
        if (first > 0) --first;
        if (last < grid.size()) ++last;
        std::vector<landscape_point> lv;
        for (std::size_t g = first; g < last; ++g) {
            const landscape_point p{grid[g], v[g]};
            // Drop the previous point when it lies on the segment to the new one.
            if (lv.size() >= 2) {
                const auto& a = lv[lv.size() - 2];
                const auto& b = lv.back();
                const double interp = a.value + (p.value - a.value) * (b.t - a.t) / (p.t - a.t);
                const double scale = std::max({std::abs(a.value), std::abs(b.value), std::abs(p.value), 1.0});
                if (std::abs(interp - b.value) <= 1e-14 * scale) lv.pop_back();
            }
            lv.push_back(p);
        }
        out.levels.push_back(std::move(lv));
    }
    return out;
}

namespace detail {

// Integral of the product of two linear functions over [t0, t1] given their end values.
inline double linear_product_integral(double h, double a0, double a1, double b0, double b1) {
    return h / 6.0 * (2.0 * a0 * b0 + a0 * b1 + a1 * b0 + 2.0 * a1 * b1);
}

inline double level_inner(const std::vector<landscape_point>& f, const std::vector<landscape_point>& g) {
    if (f.empty() || g.empty()) return 0.0;
    const double lo = std::max(f.front().t, g.front().t);
    const double hi = std::min(f.back().t, g.back().t);
    if (!(lo < hi)) return 0.0;
    std::vector<double> ts;
    ts.reserve(f.size() + g.size());
    for (const auto& p : f)
        if (p.t >= lo && p.t <= hi) ts.push_back(p.t);
    for (const auto& p : g)
        if (p.t >= lo && p.t <= hi) ts.push_back(p.t);
    ts.push_back(lo);
    ts.push_back(hi);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    // Walk both breakpoint lists alongside the merged grid.
    auto value_at = [](const std::vector<landscape_point>& h, std::size_t& cur, double t) {
        while (cur + 1 < h.size() && h[cur + 1].t <= t) ++cur;
        if (cur + 1 >= h.size()) return h.back().t == t ? h.back().value : 0.0;
        const auto& a = h[cur];
        const auto& b = h[cur + 1];
        if (t <= a.t) return a.value;
        return a.value + (b.value - a.value) * (t - a.t) / (b.t - a.t);
    };
    std::size_t cf = 0, cg = 0;
    double sum = 0.0;
    double prev_t = ts.front(), prev_f = value_at(f, cf, prev_t), prev_g = value_at(g, cg, prev_t);
    for (std::size_t s = 1; s < ts.size(); ++s) {
        const double t = ts[s];
        const double vf = value_at(f, cf, t), vg = value_at(g, cg, t);
        sum += linear_product_integral(t - prev_t, prev_f, vf, prev_g, vg);
        prev_t = t;
        prev_f = vf;
        prev_g = vg;
    }
    return sum;
}

}  // namespace detail

// sum_k of the L2 inner product of level k, integrated exactly.
inline double landscape_inner(const landscape& a, const landscape& b) {
    double sum = 0.0;
    const std::size_t k = std::min(a.levels.size(), b.levels.size());
    for (std::size_t i = 0; i < k; ++i) sum += detail::level_inner(a.levels[i], b.levels[i]);
    return sum;
}

// Lines `k,t,value` with k starting at 1.
inline void write_landscape(std::ostream& out, const landscape& l) {
    for (std::size_t k = 0; k < l.levels.size(); ++k)
        for (const auto& p : l.levels[k]) out << k + 1 << ',' << format_real(p.t) << ',' << format_real(p.value) << '\n';
}

inline landscape parse_landscape(std::istream& in, const std::string& source = "<stream>") {
    landscape out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        std::stringstream ss(line);
        std::string f[3];
        for (auto& field : f)
            if (!std::getline(ss, field, ',')) throw std::invalid_argument(where + "expected k,t,value");
        std::size_t k = 0;
        double t = 0.0, v = 0.0;
        try {
            const long kk = std::stol(f[0]);
            if (kk < 1) throw std::invalid_argument("k");
            k = static_cast<std::size_t>(kk);
            t = std::stod(f[1]);
            v = std::stod(f[2]);
        } catch (const std::exception&) {
            throw std::invalid_argument(where + "bad number");
        }
        if (out.levels.size() < k) out.levels.resize(k);
        auto& lv = out.levels[k - 1];
        if (!lv.empty() && !(lv.back().t < t)) throw std::invalid_argument(where + "breakpoints must increase in t");
        lv.push_back({t, v});
    }
    return out;
}

}  // namespace pdk
