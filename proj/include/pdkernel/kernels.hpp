#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "image.hpp"
#include "landscape.hpp"
#include "parallel.hpp"
#include "persistence.hpp"
#include "rng.hpp"
#include "weights.hpp"

namespace pdk {

// kw: the (k, w) kernels, sum of w(x) w(y) k(x, y) over pairs (the PWGK when k is Gaussian
// and w is arc). pssk: scale-space kernel. pl: landscape inner product. pi: image inner product.
enum class kernel_family { kw, pssk, pl, pi };
enum class base_kernel { gaussian, linear };
enum class outer_kind { linear, gaussian };

struct kernel_spec {
    kernel_family family = kernel_family::kw;
    base_kernel base = base_kernel::gaussian;
    double sigma = 1.0;              // base Gaussian bandwidth
    weight_fn weight;                // kw and pi
    outer_kind outer = outer_kind::linear;
    double tau = 1.0;                // outer Gaussian bandwidth
    double t = 1.0;                  // pssk
    int image_m = 20;                // pi grid size
    double image_l = 0.0;            // pi grid bound; <= 0 means the collection's largest death
    double image_sigma = 1.0;        // pi Gaussian bandwidth

    static kernel_spec pwgk(double sigma, double c, int p, outer_kind outer = outer_kind::linear, double tau = 1.0) {
        kernel_spec s;
        s.sigma = sigma;
        s.weight = weight_fn::arc(c, p);
        s.outer = outer;
        s.tau = tau;
        return s;
    }
    static kernel_spec pssk_spec(double t, outer_kind outer = outer_kind::linear, double tau = 1.0) {
        kernel_spec s;
        s.family = kernel_family::pssk;
        s.t = t;
        s.outer = outer;
        s.tau = tau;
        return s;
    }

    void validate() const {
        if (family == kernel_family::kw && base == base_kernel::gaussian)
            require(sigma > 0.0 && std::isfinite(sigma), "Gaussian base kernel needs sigma > 0");
        if (family == kernel_family::pssk) require(t > 0.0 && std::isfinite(t), "PSSK needs t > 0");
        if (family == kernel_family::pi) {
            require(image_m >= 1, "persistence image needs M >= 1");
            require(image_sigma > 0.0 && std::isfinite(image_sigma), "persistence image needs sigma > 0");
        }
        if (outer == outer_kind::gaussian) require(tau > 0.0 && std::isfinite(tau), "outer Gaussian needs tau > 0");
    }
};

inline std::string family_name(kernel_family f) {
    switch (f) {
        case kernel_family::kw: return "pwgk";
        case kernel_family::pssk: return "pssk";
        case kernel_family::pl: return "pl";
        case kernel_family::pi: return "pi";
    }
    return "";
}

inline double gaussian_kernel(const persistence_pair& x, const persistence_pair& y, double sigma) {
    const double db = x.birth - y.birth, dd = x.death - y.death;
    return std::exp(-(db * db + dd * dd) / (2.0 * sigma * sigma));
}

inline double base_value(const kernel_spec& s, const persistence_pair& x, const persistence_pair& y) {
    if (s.base == base_kernel::linear) return x.birth * y.birth + x.death * y.death;
    return gaussian_kernel(x, y, s.sigma);
}

// (k, w)-linear kernel.
inline double kw_linear(const persistence_diagram& d, const persistence_diagram& e, const kernel_spec& s) {
    double sum = 0.0;
    for (const auto& x : d.pairs) {
        const double wx = s.weight(x);
        if (wx == 0.0) continue;
        for (const auto& y : e.pairs) sum += wx * s.weight(y) * base_value(s, x, y);
    }
    return sum;
}

// D together with its mirror image across the diagonal.
inline persistence_diagram mirrored(const persistence_diagram& d) {
    persistence_diagram out;
    out.q = d.q;
    out.pairs = d.pairs;
    for (const auto& x : d.pairs) out.pairs.push_back({x.death, x.birth});
    return out;
}

inline double pssk(const persistence_diagram& d, const persistence_diagram& e, double t) {
    require(t > 0.0 && std::isfinite(t), "PSSK needs t > 0");
    double sum = 0.0;
    for (const auto& x : d.pairs) {
        for (const auto& y : e.pairs) {
            const double b1 = x.birth - y.birth, d1 = x.death - y.death;
            const double b2 = x.birth - y.death, d2 = x.death - y.birth;
            sum += std::exp(-(b1 * b1 + d1 * d1) / (8.0 * t)) - std::exp(-(b2 * b2 + d2 * d2) / (8.0 * t));
        }
    }
    return sum / (8.0 * std::numbers::pi * t);
}

// The same kernel as a (k, w)-linear kernel on mirrored diagrams: base sigma^2 = 4t, pss_sign weight.
inline double pssk_embedding(const persistence_diagram& d, const persistence_diagram& e, double t) {
    kernel_spec s;
    s.sigma = std::sqrt(4.0 * t);
    s.weight = weight_fn::pss_sign();
    return kw_linear(mirrored(d), mirrored(e), s) / (16.0 * std::numbers::pi * t);
}

inline double pl_kernel(const persistence_diagram& d, const persistence_diagram& e) {
    return landscape_inner(build_landscape(d), build_landscape(e));
}

inline double pi_kernel(const persistence_diagram& d, const persistence_diagram& e, int m, double l, double sigma,
                        const weight_fn& w) {
    return image_inner(build_image(d, m, l, sigma, w), build_image(e, m, l, sigma, w));
}

// The linear-layer kernel of a kernel_spec; pi needs an explicit grid bound here.
inline double inner_kernel(const persistence_diagram& d, const persistence_diagram& e, const kernel_spec& s) {
    switch (s.family) {
        case kernel_family::kw: return kw_linear(d, e, s);
        case kernel_family::pssk: return pssk(d, e, s.t);
        case kernel_family::pl: return pl_kernel(d, e);
        case kernel_family::pi:
            require(s.image_l > 0.0, "pi_kernel needs an explicit grid bound L > 0");
            return pi_kernel(d, e, s.image_m, s.image_l, s.image_sigma, s.weight);
    }
    return 0.0;
}

inline double distance_from_inner(double dd, double ee, double de) { return std::sqrt(std::max(0.0, dd + ee - 2.0 * de)); }

// Distance between the embeddings of D and E under the linear layer of the spec.
inline double rkhs_distance(const persistence_diagram& d, const persistence_diagram& e, const kernel_spec& s) {
    return distance_from_inner(inner_kernel(d, d, s), inner_kernel(e, e, s), inner_kernel(d, e, s));
}

inline double outer_gaussian(double distance, double tau) { return std::exp(-distance * distance / (2.0 * tau * tau)); }

// (k, w)-Gaussian kernel, exp(-d^2 / (2 tau^2)) on the embedding distance.
inline double kw_gaussian(const persistence_diagram& d, const persistence_diagram& e, const kernel_spec& s) {
    require(s.tau > 0.0 && std::isfinite(s.tau), "outer Gaussian needs tau > 0");
    return outer_gaussian(rkhs_distance(d, e, s), s.tau);
}

inline double kernel_value(const persistence_diagram& d, const persistence_diagram& e, const kernel_spec& s) {
    return s.outer == outer_kind::linear ? inner_kernel(d, e, s) : kw_gaussian(d, e, s);
}

// ---------------------------------------------------------------------------------------------
// Random Fourier features for the Gaussian-base families.

struct rff_features {
    std::vector<double> freq_b, freq_d;  // shared frequencies z_a
    Eigen::MatrixXd re, im;              // n x M_rff feature sums B^a_l = sum_x w(x) exp(i z_a . x)
    double scale = 1.0;                  // multiplies the averaged feature inner product
};

// Frequencies z_a ~ N(0, sigma^-2 I) from one seed, shared by every diagram.
inline rff_features make_rff_features(const std::vector<persistence_diagram>& ds, double sigma, const weight_fn& w,
                                      int m_rff, std::uint64_t seed, double scale = 1.0) {
    require(m_rff >= 1, "RFF needs M_rff >= 1");
    require(sigma > 0.0 && std::isfinite(sigma), "RFF needs sigma > 0");
    rff_features f;
    f.scale = scale;
    counter_rng rng(seed);
    std::normal_distribution<double> z(0.0, 1.0 / sigma);
    f.freq_b.resize(m_rff);
    f.freq_d.resize(m_rff);
    for (int a = 0; a < m_rff; ++a) {
        f.freq_b[a] = z(rng);
        f.freq_d[a] = z(rng);
    }
    const std::size_t n = ds.size();
    f.re = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), m_rff);
    f.im = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), m_rff);
    parallel_for(n, [&](std::size_t l) {
        const auto row = static_cast<Eigen::Index>(l);
        for (const auto& x : ds[l].pairs) {
            const double wx = w(x);
            if (wx == 0.0) continue;
            for (int a = 0; a < m_rff; ++a) {
                const double phase = f.freq_b[a] * x.birth + f.freq_d[a] * x.death;
                f.re(row, a) += wx * std::cos(phase);
                f.im(row, a) += wx * std::sin(phase);
            }
        }
    });
    return f;
}

// Real part of (1/M) sum_a B^a_i conj(B^a_j), times the feature scale.
inline Eigen::MatrixXd rff_inner(const rff_features& f) {
    const double c = f.scale / static_cast<double>(f.re.cols());
    Eigen::MatrixXd g = c * (f.re * f.re.transpose() + f.im * f.im.transpose());
    return 0.5 * (g + g.transpose());
}

// ---------------------------------------------------------------------------------------------
// Gram matrices.

struct gram_mode {
    bool rff = false;
    int m_rff = 1000;
    std::uint64_t seed = 0;

    static gram_mode exact() { return {}; }
    static gram_mode random_features(int m, std::uint64_t seed) { return {true, m, seed}; }
};

struct gram_matrix {
    Eigen::MatrixXd values;
    kernel_spec spec;
    gram_mode mode;

    Eigen::Index size() const { return values.rows(); }
};

// Replaces an inner-product Gram matrix with the outer Gaussian layer.
inline Eigen::MatrixXd apply_outer_gaussian(const Eigen::MatrixXd& inner, double tau) {
    require(tau > 0.0 && std::isfinite(tau), "outer Gaussian needs tau > 0");
    const Eigen::Index n = inner.rows();
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = outer_gaussian(distance_from_inner(inner(i, i), inner(j, j), inner(i, j)), tau);
    return out;
}

// Linear-layer Gram matrix, exact or from random features.
inline Eigen::MatrixXd inner_gram(const std::vector<persistence_diagram>& ds, const kernel_spec& s, const gram_mode& mode) {
    s.validate();
    const std::size_t n = ds.size();
    const auto nn = static_cast<Eigen::Index>(n);
    if (mode.rff) {
        require(s.family == kernel_family::kw || s.family == kernel_family::pssk,
                "random features approximate only the Gaussian-base kernels (pwgk, pssk)");
        require(s.family != kernel_family::kw || s.base == base_kernel::gaussian,
                "random features need a Gaussian base kernel");
        if (s.family == kernel_family::pssk) {
            std::vector<persistence_diagram> mir(n);
            for (std::size_t i = 0; i < n; ++i) mir[i] = mirrored(ds[i]);
            const double scale = 1.0 / (16.0 * std::numbers::pi * s.t);
            return rff_inner(make_rff_features(mir, std::sqrt(4.0 * s.t), weight_fn::pss_sign(), mode.m_rff, mode.seed, scale));
        }
        return rff_inner(make_rff_features(ds, s.sigma, s.weight, mode.m_rff, mode.seed));
    }

    Eigen::MatrixXd g(nn, nn);
    auto fill = [&](auto&& pair_value) {
        parallel_for(n, [&](std::size_t i) {
            for (std::size_t j = i; j < n; ++j) g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = pair_value(i, j);
        });
        g.triangularView<Eigen::StrictlyLower>() = g.transpose().triangularView<Eigen::StrictlyLower>();
    };
    switch (s.family) {
        case kernel_family::kw:
            fill([&](std::size_t i, std::size_t j) { return kw_linear(ds[i], ds[j], s); });
            break;
        case kernel_family::pssk:
            fill([&](std::size_t i, std::size_t j) { return pssk(ds[i], ds[j], s.t); });
            break;
        case kernel_family::pl: {
            std::vector<landscape> ls(n);
            parallel_for(n, [&](std::size_t i) { ls[i] = build_landscape(ds[i]); });
            fill([&](std::size_t i, std::size_t j) { return landscape_inner(ls[i], ls[j]); });
            break;
        }
        case kernel_family::pi: {
            const double l = s.image_l > 0.0 ? s.image_l : image_bound(ds);
            require(l > 0.0, "persistence image grid bound is zero (all diagrams empty)");
            std::vector<persistence_image> imgs(n);
            parallel_for(n, [&](std::size_t i) { imgs[i] = build_image(ds[i], s.image_m, l, s.image_sigma, s.weight); });
            fill([&](std::size_t i, std::size_t j) { return image_inner(imgs[i], imgs[j]); });
            break;
        }
    }
    return g;
}

inline gram_matrix gram(const std::vector<persistence_diagram>& ds, const kernel_spec& s, const gram_mode& mode = {}) {
    require(!ds.empty(), "Gram matrix of an empty collection");
    gram_matrix out{inner_gram(ds, s, mode), s, mode};
    if (s.outer == outer_kind::gaussian) out.values = apply_outer_gaussian(out.values, s.tau);
    return out;
}

// ---------------------------------------------------------------------------------------------
// Median heuristics.

// Median over diagrams with >= 2 points of the median pairwise Euclidean distance.
inline double median_sigma(const std::vector<persistence_diagram>& ds) {
    std::vector<double> per;
    for (const auto& d : ds) {
        if (d.size() < 2) continue;
        std::vector<double> dist;
        dist.reserve(d.size() * (d.size() - 1) / 2);
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j)
                dist.push_back(std::hypot(d.pairs[i].birth - d.pairs[j].birth, d.pairs[i].death - d.pairs[j].death));
        per.push_back(median(std::move(dist)));
    }
    require(!per.empty(), "median sigma needs a diagram with at least two points");
    return median(std::move(per));
}

// (median over nonempty diagrams of the median persistence)^-p.
inline double median_c(const std::vector<persistence_diagram>& ds, double p) {
    std::vector<double> per;
    for (const auto& d : ds) {
        if (d.empty()) continue;
        std::vector<double> pers;
        for (const auto& x : d.pairs) pers.push_back(x.persistence());
        per.push_back(median(std::move(pers)));
    }
    require(!per.empty(), "median C needs a nonempty diagram");
    return std::pow(median(std::move(per)), -p);
}

// Median over i < j of the embedding distances read off an inner-product Gram matrix.
inline double median_tau(const Eigen::MatrixXd& inner) {
    const Eigen::Index n = inner.rows();
    require(n >= 2, "median tau needs at least two diagrams");
    std::vector<double> dist;
    dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) dist.push_back(distance_from_inner(inner(i, i), inner(j, j), inner(i, j)));
    return median(std::move(dist));
}

inline double median_tau(const std::vector<persistence_diagram>& ds, const kernel_spec& s, const gram_mode& mode = {}) {
    require(ds.size() >= 2, "median tau needs at least two diagrams");
    return median_tau(inner_gram(ds, s, mode));
}

// The PSSK scale from the bandwidth of the mirrored diagrams: t = sigma~^2 / 4.
inline double median_t(const std::vector<persistence_diagram>& ds) {
    std::vector<persistence_diagram> mir;
    mir.reserve(ds.size());
    for (const auto& d : ds) mir.push_back(mirrored(d));
    const double s = median_sigma(mir);
    return s * s / 4.0;
}

// ---------------------------------------------------------------------------------------------
// Gram CSV: n lines of n comma-separated reals.

inline void write_gram(std::ostream& out, const Eigen::MatrixXd& g) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            if (j) out << ',';
            out << format_real(g(i, j));
        }
        out << '\n';
    }
}

inline void write_gram(const std::string& path, const Eigen::MatrixXd& g) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    write_gram(out, g);
}

// Reads a real matrix; `square` additionally requires n x n.
inline Eigen::MatrixXd parse_matrix(std::istream& in, const std::string& source, bool square) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        const std::string where = source + ":" + std::to_string(line_no) + ": ";
        std::vector<double> row;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(field, &used));
                if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw std::invalid_argument(where + "bad number '" + field + "'");
            }
            if (!std::isfinite(row.back())) throw std::invalid_argument(where + "non-finite entry");
        }
        if (!rows.empty() && row.size() != rows.front().size()) throw std::invalid_argument(where + "ragged row");
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), source + ": empty matrix");
    const auto r = static_cast<Eigen::Index>(rows.size()), c = static_cast<Eigen::Index>(rows.front().size());
    if (square) require(r == c, source + ": matrix is not square");
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

inline Eigen::MatrixXd read_matrix(const std::string& path, bool square) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);
    return parse_matrix(in, path, square);
}

inline Eigen::MatrixXd read_gram(const std::string& path) {
    Eigen::MatrixXd g = read_matrix(path, true);
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    require((g - g.transpose()).cwiseAbs().maxCoeff() <= 1e-9 * scale, path + ": Gram matrix is not symmetric");
    return g;
}

}  // namespace pdk
