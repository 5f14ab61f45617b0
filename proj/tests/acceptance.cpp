// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pdkernel/diagram_metrics.hpp"
#include "pdkernel/experiment.hpp"
#include "pdkernel/filtration.hpp"
#include "pdkernel/kernels.hpp"
#include "pdkernel/kfdr.hpp"
#include "pdkernel/kpca.hpp"
#include "pdkernel/landscape.hpp"
#include "pdkernel/persistence.hpp"

using namespace pdk;

namespace tol {
constexpr double stability = 1e-10;      // criteria 2, 3, 4
constexpr double circle = 1e-9;          // criterion 5
constexpr double circle_gap = 0.02;      // criterion 5, N = 25
constexpr double rff_entry = 0.05;       // criterion 6
constexpr double rff_slow_growth = 1.5;  // criterion 6
constexpr double exact_growth = 3.0;     // criterion 6
constexpr double pssk_rel = 1e-10;       // criterion 8
constexpr double matching = 1e-12;       // criterion 9
constexpr double oracle_rel = 1e-6;      // criterion 9
constexpr double union_exact = 1e-10;    // criterion 10
constexpr double psd = 1e-8;             // criterion 11
constexpr double pwgk_min = 0.75;        // criterion 1
constexpr double unweighted_max = 0.65;  // criterion 1
constexpr double budget_seconds = 600;   // criterion 1
constexpr double planted_rate = 0.95;    // change points
}  // namespace tol

namespace {

int failures = 0;

void report(const std::string& id, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !ok;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

persistence_diagram union_copies(const persistence_diagram& d, int n) {
    persistence_diagram u;
    u.q = d.q;
    for (int i = 0; i < n; ++i) u.pairs.insert(u.pairs.end(), d.pairs.begin(), d.pairs.end());
    return u;
}

std::vector<persistence_diagram> random_collection(std::mt19937_64& g, int n, int lo, int hi) {
    std::uniform_int_distribution<int> m(lo, hi);
    std::vector<persistence_diagram> ds;
    for (int i = 0; i < n; ++i) ds.push_back(oracle::random_diagram(g, m(g)));
    return ds;
}

void criterion_1() {
    const auto start = std::chrono::steady_clock::now();
    experiment_options o;  // 100 train / 100 test, 5 replicates
    const auto rows = run_synth_experiment(20240601, o);
    const double elapsed = seconds_since(start);
    double pwgk = 0, worst_unweighted = 0;
    std::string table;
    for (const auto& r : rows) {
        table += fmt("%s/%s/%s=%.3f+-%.3f ", r.kernel.c_str(), r.weight.c_str(), r.outer.c_str(), r.mean(), r.stddev());
        if (r.kernel == "pwgk" && r.weight == "arc5" && r.outer == "gaussian") pwgk = r.mean();
        if ((r.kernel == "pwgk" && r.weight == "one") || r.kernel == "pssk") worst_unweighted = std::max(worst_unweighted, r.mean());
    }
    std::printf("  C1 table: %s\n", table.c_str());
    report("C1 synthetic XOR: PWGK-Gaussian >= 0.75", pwgk >= tol::pwgk_min, fmt("mean accuracy %.4f over %d replicates", pwgk, o.replicates));
    report("C1 synthetic XOR: w_one and PSSK <= 0.65", worst_unweighted <= tol::unweighted_max,
           fmt("highest mean accuracy %.4f", worst_unweighted));
    report("C1 synthetic XOR: runtime <= 10 min", elapsed <= tol::budget_seconds, fmt("%.1f s", elapsed));
}

void criterion_2() {
    std::mt19937_64 g(2);
    std::uniform_int_distribution<int> size(2, 30);
    double worst = -INFINITY;
    bool ok = true;
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = oracle::random_cloud(g, size(g)), y = oracle::random_cloud(g, size(g));
        const double dh = hausdorff_distance(x, y);
        const auto fx = build_cech(x, 1), fy = build_cech(y, 1);
        const auto tx = reduce_boundary(fx), ty = reduce_boundary(fy);
        for (int q : {0, 1}) {
            const double db = bottleneck_distance(compute_persistence(fx, q, tx), compute_persistence(fy, q, ty));
            worst = std::max(worst, db - dh);
            ok = ok && db <= dh + tol::stability;
        }
    }
    report("C2 Hausdorff stability", ok, fmt("max d_B - d_H = %.3e over 100 pairs, q in {0,1}", worst));
}

void criterion_3() {
    std::mt19937_64 g(3);
    const auto pool = random_collection(g, 200, 1, 12);
    const int p = 5;
    const double sigma = median_sigma(pool), c = median_c(pool, p);
    const auto s = kernel_spec::pwgk(sigma, c, p);
    bool ok = true;
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto& d = pool[2 * trial];
        const auto& e = pool[2 * trial + 1];
        const double bound = (std::numbers::sqrt2 / sigma * total_persistence(d, p) +
                              2.0 * p * (total_persistence(d, p - 1) + total_persistence(e, p - 1))) *
                             c * bottleneck_distance(d, e);
        const double lhs = rkhs_distance(d, e, s);
        ok = ok && lhs <= bound + tol::stability;
        worst = std::max(worst, lhs / bound);
    }
    report("C3 PWGK bottleneck stability", ok, fmt("max ratio lhs/bound = %.3e (sigma %.4f, C %.4f)", worst, sigma, c));
}

void criterion_4() {
    std::mt19937_64 g(4);
    const auto pool = random_collection(g, 200, 1, 12);
    const double sigma = median_sigma(pool), c = median_c(pool, 1);
    const auto s = kernel_spec::pwgk(sigma, c, 1);
    bool ok = true;
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto& d = pool[2 * trial];
        const auto& e = pool[2 * trial + 1];
        const double bound = (std::numbers::pi / (std::numbers::sqrt2 * sigma) + 2 * c) * wasserstein_distance(d, e, 1);
        const double lhs = rkhs_distance(d, e, s);
        ok = ok && lhs <= bound + tol::stability;
        worst = std::max(worst, lhs / bound);
    }
    report("C4 1-Wasserstein stability", ok, fmt("max ratio lhs/bound = %.3e", worst));
}

void criterion_5() {
    bool ok = true;
    double worst = 0;
    for (auto [r, n] : {std::pair{1.0, 10}, {2.0, 25}, {0.2, 10}}) {
        const auto d = compute_persistence(build_cech(circle_points(0, 0, r, n), 1), 1);
        if (d.size() != 1) {
            ok = false;
            continue;
        }
        const double eb = std::abs(d.pairs[0].birth - r * std::sin(std::numbers::pi / n));
        const double ed = std::abs(d.pairs[0].death - r);
        worst = std::max({worst, eb, ed});
        ok = ok && eb <= tol::circle && ed <= tol::circle;
    }
    const double gap = std::abs(std::sin(std::numbers::pi / 25) - std::numbers::pi / 25) / (std::numbers::pi / 25);
    ok = ok && gap < tol::circle_gap;
    report("C5 circle golden values", ok, fmt("max error %.3e, relative gap at N=25 %.4f", worst, gap));
}

void criterion_6() {
    auto make = [](int m, std::uint64_t seed) {
        std::mt19937_64 g(seed);
        std::vector<persistence_diagram> ds;
        for (int i = 0; i < 20; ++i) ds.push_back(oracle::random_diagram(g, m));
        return ds;
    };
    // Fidelity at m = 200, entries compared after normalizing the exact diagonal to one.
    const auto ds = make(200, 6);
    const auto s = kernel_spec::pwgk(median_sigma(ds), median_c(ds, 5), 5);
    const auto ex = inner_gram(ds, s, gram_mode::exact());
    const auto rf = inner_gram(ds, s, gram_mode::random_features(2048, 6));
    double worst = 0, worst_raw = 0;
    for (Eigen::Index i = 0; i < 20; ++i)
        for (Eigen::Index j = 0; j < 20; ++j) {
            worst = std::max(worst, std::abs(ex(i, j) - rf(i, j)) / std::sqrt(ex(i, i) * ex(j, j)));
            worst_raw = std::max(worst_raw, std::abs(ex(i, j) - rf(i, j)));
        }
    report("C6 RFF fidelity", worst <= tol::rff_entry,
           fmt("max normalized entry error %.4f at M_rff=2048 (raw %.3g, max entry %.3g)", worst, worst_raw, ex.maxCoeff()));

    auto best_time = [&](const std::vector<persistence_diagram>& d, const gram_mode& mode) {
        double best = INFINITY;
        for (int rep = 0; rep < 3; ++rep) {
            const auto t = std::chrono::steady_clock::now();
            const auto k = inner_gram(d, kernel_spec::pwgk(s.sigma, s.weight.c, 5), mode);
            best = std::min(best, seconds_since(t));
            if (k.rows() != 20) std::abort();
        }
        return best;
    };
    const auto d1 = make(200, 61), d2 = make(400, 62);
    const double r1 = best_time(d1, gram_mode::random_features(2048, 1)), r2 = best_time(d2, gram_mode::random_features(2048, 1));
    const double e1 = best_time(d1, gram_mode::exact()), e2 = best_time(d2, gram_mode::exact());
    report("C6 RFF time grows <= 1.5x when m doubles", r2 / r1 <= tol::rff_slow_growth,
           fmt("rff %.3f s -> %.3f s (x%.2f)", r1, r2, r2 / r1));
    report("C6 exact time grows >= 3x when m doubles", e2 / e1 >= tol::exact_growth,
           fmt("exact %.3f s -> %.3f s (x%.2f)", e1, e2, e2 / e1));
}

void criterion_7() {
    persistence_diagram d, e;
    d.q = e.q = 1;
    d.pairs = {{1, 2}};
    e.pairs = {{1, 2.1}};
    kernel_spec s;
    s.sigma = 0.01;
    s.weight = weight_fn::one();
    const double exact = kw_linear(d, e, s);
    int in_band = 0;
    double lo = INFINITY, hi = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const double est = std::abs(inner_gram({d, e}, s, gram_mode::random_features(1000, seed))(0, 1));
        in_band += est >= 1e-5 && est <= 1e-1;
        lo = std::min(lo, est);
        hi = std::max(hi, est);
    }
    report("C7 RFF pathology", exact < 1e-20 && in_band == 100,
           fmt("exact %.3e, |rff| in [%.2e, %.2e], %d/100 seeds in [1e-5, 1e-1]", exact, lo, hi, in_band));
}

void criterion_8() {
    std::mt19937_64 g(8);
    std::uniform_real_distribution<double> ut(0.005, 1.0);
    double worst = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = oracle::random_diagram(g, 1 + trial % 12), e = oracle::random_diagram(g, 1 + (trial * 5) % 9);
        const double t = ut(g);
        kernel_spec s;
        s.sigma = std::sqrt(4 * t);
        s.weight = weight_fn::pss_sign();
        const double a = pssk(d, e, t), b = kw_linear(mirrored(d), mirrored(e), s) / (16 * std::numbers::pi * t);
        worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    report("C8 PSSK embedding identity", worst <= tol::pssk_rel, fmt("max relative error %.3e over 50 pairs", worst));
}

void criterion_9() {
    std::mt19937_64 g(9);
    double wb = 0, ww = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = oracle::random_diagram(g, trial % 5), e = oracle::random_diagram(g, (trial / 5) % 5);
        wb = std::max(wb, std::abs(bottleneck_distance(d, e) - oracle::bottleneck(d, e)));
        for (double p : {1.0, 2.0}) ww = std::max(ww, std::abs(wasserstein_distance(d, e, p) - oracle::wasserstein(d, e, p)));
    }
    report("C9 matching vs enumeration", wb <= tol::matching && ww <= tol::matching,
           fmt("200 cases, max bottleneck error %.2e, max Wasserstein error %.2e", wb, ww));

    double kfdr_err = 0, kpca_err = 0;
    for (int trial = 0; trial < 5; ++trial) {
        const int n = 20 + 5 * trial;
        std::vector<persistence_diagram> ds;
        for (int i = 0; i < n; ++i) ds.push_back(oracle::random_diagram(g, 1 + i % 6));
        const auto phi = oracle::rff_feature_matrix(ds, 0.4, weight_fn::arc(1, 3), 40, 900 + trial);
        const Eigen::MatrixXd k = phi * phi.transpose();
        const auto curve = kfdr(k, 1e-3);
        for (int l = 1; l < n; ++l) {
            const double ref = oracle::kfdr_explicit(phi, l, 1e-3);
            kfdr_err = std::max(kfdr_err, std::abs(curve.values[l - 1] - ref) / ref);
        }
        const auto e = kpca(k, 3);
        const auto ref = oracle::pca_explicit(phi, 3);
        for (int a = 0; a < 3; ++a) {
            kpca_err = std::max(kpca_err, std::abs(e.eigenvalues[a] - ref.eigenvalues[a]) / ref.eigenvalues[a]);
            const double sign = e.scores.col(a).dot(ref.scores.col(a)) >= 0 ? 1 : -1;
            kpca_err = std::max(kpca_err, (e.scores.col(a) - sign * ref.scores.col(a)).cwiseAbs().maxCoeff() /
                                              ref.scores.col(a).cwiseAbs().maxCoeff());
        }
    }
    report("C9 KFDR and KPCA vs explicit features", kfdr_err <= tol::oracle_rel && kpca_err <= tol::oracle_rel,
           fmt("max relative error KFDR %.2e, KPCA %.2e", kfdr_err, kpca_err));

    double pl_err = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = oracle::random_diagram(g, 1 + trial % 6), b = oracle::random_diagram(g, 1 + (trial + 3) % 7);
        pl_err = std::max(pl_err, std::abs(landscape_inner(build_landscape(a), build_landscape(b)) -
                                           oracle::landscape_inner_quadrature(a, b, 100000)));
    }
    report("C9 landscape inner vs quadrature", pl_err <= tol::oracle_rel, fmt("max error %.2e with 1e5 partitions", pl_err));
}

void criterion_10() {
    std::mt19937_64 g(10);
    const auto d = oracle::random_diagram(g, 6);
    persistence_diagram empty;
    empty.q = 1;
    const auto s = kernel_spec::pwgk(0.5, 1.0, 5);
    double wk = 0, wb = 0;
    for (int n : {1, 2, 5, 10}) {
        const auto u = union_copies(d, n);
        wk = std::max(wk, std::abs(rkhs_distance(u, empty, s) - n * rkhs_distance(d, empty, s)));
        wk = std::max(wk, std::abs(rkhs_distance(u, empty, s) - n * std::sqrt(kw_linear(d, d, s))));
        wb = std::max(wb, std::abs(bottleneck_distance(u, empty) - bottleneck_distance(d, empty)));
    }
    report("C10 additive-kernel counterexample", wk <= tol::union_exact && wb <= tol::union_exact,
           fmt("max |d_K(nD) - n d_K(D)| = %.2e, max |d_B(nD) - d_B(D)| = %.2e", wk, wb));
}

void criterion_11() {
    std::mt19937_64 g(11);
    const auto ds = random_collection(g, 30, 1, 15);
    const double sigma = median_sigma(ds);
    std::vector<std::pair<std::string, kernel_spec>> specs;
    specs.emplace_back("pwgk", kernel_spec::pwgk(sigma, median_c(ds, 5), 5));
    specs.emplace_back("pssk", kernel_spec::pssk_spec(median_t(ds)));
    kernel_spec pl;
    pl.family = kernel_family::pl;
    specs.emplace_back("pl", pl);
    kernel_spec pi;
    pi.family = kernel_family::pi;
    pi.image_sigma = sigma;
    pi.weight = weight_fn::pers_linear(image_bound(ds));
    specs.emplace_back("pi", pi);
    bool ok = true;
    std::string detail;
    for (const auto& [name, s] : specs) {
        const auto k = gram(ds, s).values;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
        const double ratio = eig.eigenvalues().minCoeff() / k.trace();
        ok = ok && ratio >= -tol::psd;
        detail += fmt("%s %.2e ", name.c_str(), ratio);
    }
    report("C11 PSD Gram matrices", ok, "min eigenvalue / trace: " + detail);
}

// Noise near the diagonal plus one prominent generator whose lifetime shifts after the split.
persistence_diagram planted_diagram(std::mt19937_64& g, double lifetime) {
    std::uniform_real_distribution<double> u(0, 1), small(0.0, 0.1), birth(0.1, 0.3);
    std::normal_distribution<double> life(lifetime, 0.1);
    persistence_diagram d;
    d.q = 1;
    for (int i = 0; i < 10; ++i) {
        const double b = u(g);
        d.pairs.push_back({b, b + 1e-3 + small(g)});
    }
    const double b = birth(g);
    d.pairs.push_back({b, b + std::max(0.05, life(g))});
    d.normalize();
    return d;
}

void planted_change_points() {
    std::mt19937_64 g(12);
    std::uniform_int_distribution<int> split(10, 30);
    int hits = 0, ref_hits = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 40, l = split(g);
        std::vector<persistence_diagram> ds;
        // A lifetime shift of 6 noise deviations; an ideal mean-shift detector on the lifetimes is exact in ~99.6%.
        for (int i = 0; i < n; ++i) ds.push_back(planted_diagram(g, i < l ? 1.0 : 1.6));
        const auto s = kernel_spec::pwgk(median_sigma(ds), median_c(ds, 5), 5);
        hits += kfdr(gram(ds, s).values, 1e-3).argmax == l;
        // Reference: scalar mean-shift statistic on the largest lifetime of each diagram.
        std::vector<double> life;
        for (const auto& d : ds) {
            double m = 0.0;
            for (const auto& x : d.pairs) m = std::max(m, x.persistence());
            life.push_back(m);
        }
        int best = 1;
        double top = -1.0;
        for (int k = 1; k < n; ++k) {
            double a = 0.0, b = 0.0;
            for (int i = 0; i < k; ++i) a += life[i] / k;
            for (int i = k; i < n; ++i) b += life[i] / (n - k);
            const double v = double(k) * (n - k) / n * (a - b) * (a - b);
            if (v > top) top = v, best = k;
        }
        ref_hits += best == l;
    }
    report("Planted KFDR change points", hits >= tol::planted_rate * 100,
           fmt("argmax equals the split in %d/100 trials (scalar reference %d/100)", hits, ref_hits));
}

}  // namespace

int main() {
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    planted_change_points();
    criterion_1();
    std::printf("%d failing check(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
