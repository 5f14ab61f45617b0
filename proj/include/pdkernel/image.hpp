#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <vector>

#include "common.hpp"
#include "persistence.hpp"
#include "weights.hpp"

namespace pdk {

// M x M pixel integrals of the weighted Gaussian surface on the grid a_i = i L / M, i = 0..M.
// Pixel (i, j), 1-based, spans (a_{i-1}, a_i] in birth and (a_{j-1}, a_j] in death and is stored
// at flat index (i - 1) + M (j - 1).
struct persistence_image {
    int m = 0;
    double l = 0.0;
    double sigma = 0.0;
    weight_fn weight;
    std::vector<double> pixels;

    double at(int i, int j) const { return pixels[static_cast<std::size_t>(i - 1) + static_cast<std::size_t>(m) * (j - 1)]; }
};

namespace detail {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Mass of N(mu, sigma^2) in each grid cell (a_{i-1}, a_i].
inline std::vector<double> cell_masses(double mu, int m, double l, double sigma) {
    std::vector<double> out(m);
    double prev = normal_cdf((0.0 - mu) / sigma);
    for (int i = 1; i <= m; ++i) {
        const double cur = normal_cdf((l * i / m - mu) / sigma);
        out[i - 1] = cur - prev;
        prev = cur;
    }
    return out;
}

}  // namespace detail

inline persistence_image build_image(const persistence_diagram& d, int m, double l, double sigma, const weight_fn& w) {
    require(m >= 1, "persistence image needs M >= 1");
    require(l > 0.0 && std::isfinite(l), "persistence image needs L > 0");
    require(sigma > 0.0 && std::isfinite(sigma), "persistence image needs sigma > 0");
    persistence_image img{m, l, sigma, w, std::vector<double>(static_cast<std::size_t>(m) * m, 0.0)};
    for (const auto& x : d.pairs) {
        const double wx = w(x);
        if (wx == 0.0) continue;
        const auto bi = detail::cell_masses(x.birth, m, l, sigma);
        const auto dj = detail::cell_masses(x.death, m, l, sigma);
        for (int j = 0; j < m; ++j) {
            const double f = wx * dj[j];
            if (f == 0.0) continue;
            double* row = img.pixels.data() + static_cast<std::size_t>(j) * m;
            for (int i = 0; i < m; ++i) row[i] += f * bi[i];
        }
    }
    return img;
}

// Largest death over a collection, the default grid bound.
inline double image_bound(const std::vector<persistence_diagram>& ds) {
    double l = 0.0;
    for (const auto& d : ds)
        for (const auto& x : d.pairs) l = std::max(l, x.death);
    return l;
}

inline double image_inner(const persistence_image& a, const persistence_image& b) {
    require(a.m == b.m, "persistence images of different size");
    double s = 0.0;
    for (std::size_t k = 0; k < a.pixels.size(); ++k) s += a.pixels[k] * b.pixels[k];
    return s;
}

// Row i (birth index), column j (death index).
inline void write_image(std::ostream& out, const persistence_image& img) {
    for (int i = 1; i <= img.m; ++i) {
        for (int j = 1; j <= img.m; ++j) {
            if (j > 1) out << ',';
            out << format_real(img.at(i, j));
        }
        out << '\n';
    }
}

inline void write_image(const std::string& path, const persistence_image& img) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    write_image(out, img);
}

}  // namespace pdk
