#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "cross_validate.hpp"
#include "kernels.hpp"
#include "synth.hpp"

namespace pdk {

struct experiment_options {
    std::size_t n_train = 100;
    std::size_t n_test = 100;
    int replicates = 5;
    int folds = 10;
    int p = 5;  // arc weight degree
    std::vector<double> sigma_factors{0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> c_factors{0.01, 0.05, 0.1, 0.5, 1.0};
    std::vector<double> tau_factors{0.5, 1.0, 2.0};
    std::vector<double> c_svm{0.1, 1.0, 10.0, 100.0};
    std::vector<int> image_sizes{20, 100};
};

// One row of the report: a kernel variant with its test accuracy per replicate.
struct experiment_row {
    std::string kernel, weight, outer;
    std::vector<double> accuracy;
    std::vector<std::string> chosen;  // selected parameters per replicate

    double mean() const {
        double s = 0.0;
        for (double a : accuracy) s += a;
        return accuracy.empty() ? 0.0 : s / static_cast<double>(accuracy.size());
    }
    double stddev() const {
        if (accuracy.size() < 2) return 0.0;
        const double mu = mean();
        double s = 0.0;
        for (double a : accuracy) s += (a - mu) * (a - mu);
        return std::sqrt(s / static_cast<double>(accuracy.size() - 1));
    }
};

namespace detail {

struct candidate {
    Eigen::MatrixXd inner;  // linear-layer Gram over train + test
    std::string params;
};

struct variant {
    std::string kernel, weight;
    std::function<std::vector<candidate>()> candidates;
};

inline std::vector<std::size_t> iota_range(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> v;
    for (std::size_t i = lo; i < hi; ++i) v.push_back(i);
    return v;
}

}  // namespace detail

struct replicate_data {
    std::vector<persistence_diagram> diagrams;  // train first, then test
    std::vector<int> labels;                    // +-1
};

inline replicate_data make_replicate(std::uint64_t seed, int replicate, const experiment_options& o) {
    const auto ds = make_synth_dataset(counter_rng(seed).split(static_cast<std::uint64_t>(replicate)).key(), o.n_train + o.n_test);
    replicate_data r;
    r.diagrams = ds.diagrams;
    for (const auto& s : ds.samples) r.labels.push_back(s.label ? 1 : -1);
    return r;
}

// Linear and Gaussian rows for every kernel variant on one replicate. Parameters are tuned by
// stratified CV on the training block, medians are taken over training diagrams only.
inline void run_replicate(const replicate_data& data, std::uint64_t cv_seed, const experiment_options& o,
                          std::vector<experiment_row>& rows) {
    const std::size_t n = data.diagrams.size();
    const auto train = detail::iota_range(0, o.n_train), test = detail::iota_range(o.n_train, n);
    const std::vector<persistence_diagram> train_ds(data.diagrams.begin(), data.diagrams.begin() + static_cast<long>(o.n_train));
    std::vector<int> ytr(data.labels.begin(), data.labels.begin() + static_cast<long>(o.n_train));

    const double sigma0 = median_sigma(train_ds);
    const double c0_pers = std::pow(median_c(train_ds, 1.0), -1.0);  // median persistence
    const double t0 = median_t(train_ds);
    const double l_img = image_bound(data.diagrams);
    const auto all = data.diagrams;

    auto kw_candidates = [&](const weight_fn* fixed, bool arc) {
        std::vector<detail::candidate> out;
        for (double fs : o.sigma_factors) {
            std::vector<double> cs = arc ? o.c_factors : std::vector<double>{0.0};
            for (double fc : cs) {
                kernel_spec s;
                s.sigma = sigma0 * fs;
                s.weight = arc ? weight_fn::arc(std::pow(fc * c0_pers, -o.p), o.p) : *fixed;
                std::string params = "sigma=" + format_real(s.sigma);
                if (arc) params += ";C=" + format_real(s.weight.c);
                out.push_back({inner_gram(all, s, gram_mode::exact()), params});
            }
        }
        return out;
    };
    std::vector<detail::variant> variants;
    const auto one = weight_fn::one();
    const auto pers = weight_fn::pers_linear(l_img);
    variants.push_back({"pwgk", "arc" + std::to_string(o.p), [&] { return kw_candidates(nullptr, true); }});
    variants.push_back({"pwgk", "one", [&] { return kw_candidates(&one, false); }});
    variants.push_back({"pwgk", "pers", [&] { return kw_candidates(&pers, false); }});
    variants.push_back({"pssk", "pss", [&] {
                            std::vector<detail::candidate> out;
                            for (double fs : o.sigma_factors) {
                                const auto s = kernel_spec::pssk_spec(t0 * fs * fs);
                                out.push_back({inner_gram(all, s, gram_mode::exact()), "t=" + format_real(s.t)});
                            }
                            return out;
                        }});
    variants.push_back({"pl", "one", [&] {
                            kernel_spec s;
                            s.family = kernel_family::pl;
                            return std::vector<detail::candidate>{{inner_gram(all, s, gram_mode::exact()), "-"}};
                        }});
    for (int m : o.image_sizes) {
        for (bool arc : {false, true}) {
            variants.push_back({"pi" + std::to_string(m), arc ? "arc" + std::to_string(o.p) : "pers", [&, m, arc] {
                                    std::vector<detail::candidate> out;
                                    std::vector<double> cs = arc ? o.c_factors : std::vector<double>{0.0};
                                    for (double fs : o.sigma_factors) {
                                        for (double fc : cs) {
                                            kernel_spec s;
                                            s.family = kernel_family::pi;
                                            s.image_m = m;
                                            s.image_l = l_img;
                                            s.image_sigma = sigma0 * fs;
                                            s.weight = arc ? weight_fn::arc(std::pow(fc * c0_pers, -o.p), o.p) : pers;
                                            std::string params = "sigma=" + format_real(s.image_sigma);
                                            if (arc) params += ";C=" + format_real(s.weight.c);
                                            out.push_back({inner_gram(all, s, gram_mode::exact()), params});
                                        }
                                    }
                                    return out;
                                }});
        }
    }

    auto find_row = [&](const std::string& k, const std::string& w, const std::string& outer) -> experiment_row& {
        for (auto& r : rows)
            if (r.kernel == k && r.weight == w && r.outer == outer) return r;
        rows.push_back({k, w, outer, {}, {}});
        return rows.back();
    };
    auto evaluate = [&](const std::vector<Eigen::MatrixXd>& grams, const std::vector<std::string>& params,
                        experiment_row& row) {
        std::vector<Eigen::MatrixXd> train_grams;
        for (const auto& g : grams) train_grams.push_back(submatrix(g, train, train));
        const auto choice = cross_validate(train_grams, ytr, o.c_svm, o.folds, cv_seed);
        row.accuracy.push_back(holdout_accuracy(grams[choice.gram_index], data.labels, train, test, choice.c_svm));
        row.chosen.push_back(params[choice.gram_index] + ";C_svm=" + format_real(choice.c_svm));
    };

    for (const auto& v : variants) {
        const auto cands = v.candidates();
        std::vector<Eigen::MatrixXd> lin, gau;
        std::vector<std::string> lin_params, gau_params;
        for (const auto& c : cands) {
            lin.push_back(c.inner);
            lin_params.push_back(c.params);
            const double tau0 = median_tau(submatrix(c.inner, train, train));
            if (!(tau0 > 0.0)) continue;  // every training embedding coincides
            for (double ft : o.tau_factors) {
                gau.push_back(apply_outer_gaussian(c.inner, tau0 * ft));
                gau_params.push_back(c.params + ";tau=" + format_real(tau0 * ft));
            }
        }
        evaluate(lin, lin_params, find_row(v.kernel, v.weight, "linear"));
        if (gau.empty()) throw numerical_error(v.kernel + "/" + v.weight + ": median tau is zero");
        evaluate(gau, gau_params, find_row(v.kernel, v.weight, "gaussian"));
    }
}

inline std::vector<experiment_row> run_synth_experiment(std::uint64_t seed, const experiment_options& o = {}) {
    std::vector<experiment_row> rows;
    for (int r = 0; r < o.replicates; ++r)
        run_replicate(make_replicate(seed, r, o), counter_rng(seed).split(1000 + static_cast<std::uint64_t>(r)).key(), o, rows);
    return rows;
}

inline void write_report(std::ostream& out, const std::vector<experiment_row>& rows) {
    out << "kernel,weight,outer,mean_acc,std_acc\n";
    for (const auto& r : rows)
        out << r.kernel << ',' << r.weight << ',' << r.outer << ',' << format_real(r.mean()) << ',' << format_real(r.stddev()) << '\n';
}

}  // namespace pdk
