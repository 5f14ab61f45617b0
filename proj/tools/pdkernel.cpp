// pdkernel command-line tool.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pdkernel/ball_model.hpp"
#include "pdkernel/cross_validate.hpp"
#include "pdkernel/diagram_metrics.hpp"
#include "pdkernel/experiment.hpp"
#include "pdkernel/filtration.hpp"
#include "pdkernel/kernels.hpp"
#include "pdkernel/kfdr.hpp"
#include "pdkernel/kpca.hpp"
#include "pdkernel/persistence.hpp"
#include "pdkernel/svm.hpp"
#include "pdkernel/synth.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace pdk;

constexpr int exit_usage = 2, exit_numerical = 3, exit_io = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Parameters, input fingerprints and outputs of one run.
struct manifest {
    json doc;

    explicit manifest(const std::string& command) {
        doc["command"] = command;
        doc["version"] = version;
        doc["parameters"] = json::object();
        doc["inputs"] = json::object();
    }
    void param(const std::string& key, const json& v) { doc["parameters"][key] = v; }
    void real(const std::string& key, double v) { doc["parameters"][key] = format_real(v); }
    void seed(std::uint64_t s) { doc["seed"] = s; }
    void input(const std::string& path) { doc["inputs"][path] = hex64(fnv1a(slurp(path))); }
    void input_dir(const std::string& dir) {
        namespace fs = std::filesystem;
        std::vector<std::string> files;
        for (const auto& e : fs::recursive_directory_iterator(dir))
            if (e.is_regular_file()) files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
        std::string all;
        for (const auto& f : files) all += f.substr(dir.size()) + '\n' + slurp(f);
        doc["inputs"][dir] = hex64(fnv1a(all));
    }

    // <out>.manifest.json next to the output, or stderr without one.
    void emit(const std::string& out) const {
        const std::string text = doc.dump(2) + "\n";
        if (out.empty()) {
            std::cerr << text;
            return;
        }
        std::ofstream f(out + ".manifest.json");
        if (!f) throw io_error("cannot write " + out + ".manifest.json");
        f << text;
    }
};

// A real option that may also be `auto`.
struct auto_real {
    std::string text = "auto";

    bool is_auto() const { return text == "auto"; }
    double value(const std::string& name) const {
        try {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(name);
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("--" + name + " expects a number or 'auto', got '" + text + "'");
        }
    }
};

// Output stream that is a file when a path is given, else stdout.
struct output {
    std::ofstream file;
    std::ostream* stream = &std::cout;

    explicit output(const std::string& path) {
        if (path.empty()) return;
        file.open(path);
        if (!file) throw io_error("cannot write " + path);
        stream = &file;
    }
    std::ostream& operator*() { return *stream; }
};

// --------------------------------------------------------------------------------------------
// Diagram inputs shared by gram / classify.

struct diagram_inputs {
    std::vector<std::string> files;
    std::string dataset;
    int q = -1;

    void add(CLI::App* cmd, const std::string& prefix = "") {
        cmd->add_option("--" + prefix + "diagrams", files, "diagram CSV files, one per sample");
        cmd->add_option("--" + prefix + "dataset", dataset, "synthetic dataset directory (labels.csv layout)");
    }

    labelled_diagrams load(manifest& m) const {
        require(files.empty() != dataset.empty(), "give exactly one of a diagram list or a dataset directory");
        if (!dataset.empty()) {
            m.input_dir(dataset);
            return read_synth_dataset(dataset);
        }
        labelled_diagrams out;
        for (const auto& f : files) {
            m.input(f);
            out.diagrams.push_back(read_diagram(f, q));
        }
        return out;
    }
};

// --------------------------------------------------------------------------------------------
// Kernel options shared by gram / classify.

struct kernel_options {
    std::string kernel = "pwgk", outer = "linear", base = "gaussian", weight = "arc";
    auto_real sigma, cweight, tau, t, pi_sigma, pi_l;
    int pdeg = 5;
    int grid = 20;

    void add(CLI::App* cmd) {
        cmd->add_option("--kernel", kernel, "pwgk | pssk | pl | pi")->check(CLI::IsMember({"pwgk", "pssk", "pl", "pi"}));
        cmd->add_option("--outer", outer, "linear | gaussian")->check(CLI::IsMember({"linear", "gaussian"}));
        cmd->add_option("--base", base, "base kernel of pwgk: gaussian | linear")->check(CLI::IsMember({"gaussian", "linear"}));
        cmd->add_option("--weight", weight, "arc | one | pers (pwgk and pi)")->check(CLI::IsMember({"arc", "one", "pers"}));
        cmd->add_option("--sigma", sigma.text, "base Gaussian bandwidth or auto");
        cmd->add_option("--cweight", cweight.text, "arc weight C or auto");
        cmd->add_option("--pdeg", pdeg, "arc weight degree p")->check(CLI::PositiveNumber);
        cmd->add_option("--tau", tau.text, "outer Gaussian bandwidth or auto");
        cmd->add_option("--t", t.text, "PSSK scale or auto");
        cmd->add_option("--grid", grid, "persistence image size M")->check(CLI::PositiveNumber);
        cmd->add_option("--pi-sigma", pi_sigma.text, "persistence image bandwidth or auto");
        cmd->add_option("--pi-l", pi_l.text, "persistence image grid bound L or auto (largest death)");
    }
};

kernel_family family_of(const std::string& k) {
    if (k == "pssk") return kernel_family::pssk;
    if (k == "pl") return kernel_family::pl;
    if (k == "pi") return kernel_family::pi;
    return kernel_family::kw;
}

// Candidate parameter values: the given value, or the median heuristic times the factors.
std::vector<double> candidates(const auto_real& a, const std::string& name, double heuristic,
                               const std::vector<double>& factors) {
    if (!a.is_auto()) return {a.value(name)};
    std::vector<double> out;
    for (double f : factors) out.push_back(heuristic * f);
    return out;
}

// Resolves every `auto` of the linear layer against the collection; with `grid` the auto
// values expand to the experiment's factor grids instead of the plain median.
std::vector<kernel_spec> resolve_specs(const kernel_options& o, const std::vector<persistence_diagram>& ref,
                                       const std::vector<persistence_diagram>& all, bool grid, manifest& m) {
    const experiment_options ex;
    const std::vector<double> unit{1.0};
    const auto& sf = grid ? ex.sigma_factors : unit;
    const auto& cf = grid ? ex.c_factors : unit;

    kernel_spec base;
    base.family = family_of(o.kernel);
    base.base = o.base == "linear" ? base_kernel::linear : base_kernel::gaussian;
    base.outer = o.outer == "gaussian" ? outer_kind::gaussian : outer_kind::linear;
    base.image_m = o.grid;

    std::vector<double> sigmas{1.0}, cs{1.0}, ts{1.0};
    const bool needs_sigma = (base.family == kernel_family::kw && base.base == base_kernel::gaussian) ||
                             base.family == kernel_family::pi;
    const bool needs_c = (base.family == kernel_family::kw || base.family == kernel_family::pi) && o.weight == "arc";
    const auto& sigma_opt = base.family == kernel_family::pi ? o.pi_sigma : o.sigma;
    if (needs_sigma) {
        const double h = sigma_opt.is_auto() ? median_sigma(ref) : 0.0;
        sigmas = candidates(sigma_opt, "sigma", h, sf);
        if (sigma_opt.is_auto()) m.real("sigma_median", h);
    }
    if (needs_c) {
        // C = (c * median persistence)^-p, so c = 1 reproduces the plain median heuristic.
        if (o.cweight.is_auto()) {
            const double med_pers = std::pow(median_c(ref, 1.0), -1.0);
            for (double f : cf) cs.push_back(std::pow(f * med_pers, -o.pdeg));
            cs.erase(cs.begin());
            m.real("C_median", std::pow(med_pers, -o.pdeg));
        } else {
            cs = {o.cweight.value("cweight")};
        }
    }
    if (base.family == kernel_family::pssk) {
        const double h = o.t.is_auto() ? median_t(ref) : 0.0;
        ts.clear();
        if (o.t.is_auto()) {
            for (double f : sf) ts.push_back(h * f * f);
            m.real("t_median", h);
        } else {
            ts = {o.t.value("t")};
        }
    }
    if (base.family == kernel_family::pi) {
        base.image_l = o.pi_l.is_auto() ? image_bound(all) : o.pi_l.value("pi-l");
        require(base.image_l > 0.0, "persistence image grid bound must be positive");
        m.real("pi_l", base.image_l);
    }

    const double pers_l = base.family == kernel_family::pi ? base.image_l : image_bound(all);
    if (o.weight == "pers") {
        require(pers_l > 0.0, "pers weight needs a nonempty collection");
        m.real("weight_L", pers_l);
    }
    std::vector<kernel_spec> out;
    for (double s : sigmas)
        for (double c : cs)
            for (double t : ts) {
                kernel_spec k = base;
                if (base.family == kernel_family::pi) k.image_sigma = s;
                else k.sigma = s;
                k.t = t;
                if (o.weight == "arc") k.weight = weight_fn::arc(c, o.pdeg);
                else if (o.weight == "pers") k.weight = weight_fn::pers_linear(pers_l);
                else k.weight = weight_fn::one();
                out.push_back(k);
            }
    return out;
}

json spec_json(const kernel_spec& s) {
    json j;
    j["family"] = family_name(s.family);
    j["outer"] = s.outer == outer_kind::gaussian ? "gaussian" : "linear";
    switch (s.family) {
        case kernel_family::kw:
            j["base"] = s.base == base_kernel::gaussian ? "gaussian" : "linear";
            if (s.base == base_kernel::gaussian) j["sigma"] = format_real(s.sigma);
            j["weight"] = s.weight.name();
            break;
        case kernel_family::pssk: j["t"] = format_real(s.t); break;
        case kernel_family::pl: break;
        case kernel_family::pi:
            j["M"] = s.image_m;
            j["L"] = format_real(s.image_l);
            j["pi_sigma"] = format_real(s.image_sigma);
            j["weight"] = s.weight.name();
            break;
    }
    if (s.weight.kind == weight_kind::arc && s.family != kernel_family::pssk && s.family != kernel_family::pl) {
        j["C"] = format_real(s.weight.c);
        j["p"] = s.weight.p;
    }
    if (s.weight.kind == weight_kind::pers_linear) j["weight_L"] = format_real(s.weight.l);
    if (s.outer == outer_kind::gaussian) j["tau"] = format_real(s.tau);
    return j;
}

// --------------------------------------------------------------------------------------------
// Commands.

int run_diagram(const std::string& input, const std::string& complex, std::vector<int> qs, const std::string& rmax,
                const std::string& out) {
    manifest m("diagram");
    m.input(input);
    const auto cloud = read_point_cloud(input);
    require(!cloud.empty(), input + ": empty point cloud");
    const auto kind = complex == "rips" ? complex_kind::rips : complex_kind::cech;
    const double r = rmax == "auto" ? std::numeric_limits<double>::quiet_NaN() : auto_real{rmax}.value("rmax");
    std::sort(qs.begin(), qs.end());
    qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
    std::vector<persistence_diagram> ds;
    std::optional<implicit_persistence> implicit;
    std::optional<filtered_complex> explicit_fc;
    std::optional<reduction_transcript> tr;
    for (int q : qs) {
        require(q >= 0 && q <= 2, "--q must be 0, 1 or 2");
        if (q <= 1) {
            if (!implicit) implicit.emplace(cloud, kind, r);
            ds.push_back(implicit->diagram(q));
        } else {
            if (!explicit_fc) {
                explicit_fc = kind == complex_kind::rips ? build_rips(cloud, 2, r) : build_cech(cloud, 2, r);
                tr = reduce_boundary(*explicit_fc);
            }
            ds.push_back(compute_persistence(*explicit_fc, q, *tr));
        }
    }
    output o(out);
    write_diagrams(*o, ds);
    m.param("complex", complex);
    m.param("q", qs);
    m.real("rmax", implicit ? implicit->r_max() : explicit_fc->r_max);
    m.emit(out);
    return 0;
}

int run_dist(const std::vector<std::string>& files, const std::string& metric, double p, int q) {
    manifest m("dist");
    for (const auto& f : files) m.input(f);
    const auto a = read_diagram(files[0], q), b = read_diagram(files[1], q);
    require(a.q == b.q || a.empty() || b.empty(), "diagrams have different dimensions; select one with --q");
    persistence_diagram aa = a, bb = b;
    aa.q = bb.q = std::max(a.q, b.q);
    const double d = metric == "bottleneck" ? bottleneck_distance(aa, bb) : wasserstein_distance(aa, bb, p);
    std::cout << format_real(d) << '\n';
    m.param("metric", metric);
    if (metric == "wasserstein") m.real("p", p);
    m.emit("");
    return 0;
}

int run_gram(const diagram_inputs& in, const kernel_options& ko, const std::string& mode, int mrff, std::uint64_t seed,
             const std::string& out) {
    manifest m("gram");
    const auto data = in.load(m);
    require(!data.diagrams.empty(), "no diagrams given");
    auto specs = resolve_specs(ko, data.diagrams, data.diagrams, false, m);
    kernel_spec spec = specs.front();
    const gram_mode gm = mode == "rff" ? gram_mode::random_features(mrff, seed) : gram_mode::exact();
    Eigen::MatrixXd g = inner_gram(data.diagrams, spec, gm);
    if (spec.outer == outer_kind::gaussian) {
        if (ko.tau.is_auto()) {
            spec.tau = median_tau(g);
            if (!(spec.tau > 0.0)) throw numerical_error("median heuristic gives tau = 0 (all embeddings coincide)");
        } else {
            spec.tau = ko.tau.value("tau");
        }
        g = apply_outer_gaussian(g, spec.tau);
    }
    output o(out);
    write_gram(*o, g);
    m.param("spec", spec_json(spec));
    m.param("mode", mode);
    if (gm.rff) m.param("mrff", mrff);
    m.seed(seed);
    m.emit(out);
    return 0;
}

int run_kfdr(const std::string& gram_path, double gamma, const std::string& out) {
    manifest m("kfdr");
    m.input(gram_path);
    const auto c = kfdr(read_gram(gram_path), gamma);
    output o(out);
    *o << "l,kfdr\n";
    for (std::size_t l = 0; l < c.values.size(); ++l) *o << l + 1 << ',' << format_real(c.values[l]) << '\n';
    if (!out.empty()) std::cout << "argmax," << c.argmax << '\n';
    m.real("gamma", gamma);
    m.param("argmax", c.argmax);
    m.emit(out);
    return 0;
}

int run_kpca(const std::string& gram_path, int k, const std::string& out) {
    manifest m("kpca");
    m.input(gram_path);
    const auto e = kpca(read_gram(gram_path), k);
    output o(out);
    for (Eigen::Index i = 0; i < e.scores.rows(); ++i) {
        for (Eigen::Index a = 0; a < e.scores.cols(); ++a) *o << (a ? "," : "") << format_real(e.scores(i, a));
        *o << '\n';
    }
    m.param("k", k);
    json ev = json::array(), contrib = json::array();
    for (double v : e.eigenvalues) ev.push_back(format_real(v));
    for (double v : e.contribution) contrib.push_back(format_real(v));
    m.param("eigenvalues", ev);
    m.param("contribution", contrib);
    m.emit(out);
    return 0;
}

int run_classify(const diagram_inputs& train_in, const diagram_inputs& test_in, const kernel_options& ko,
                 const std::string& label_file, int folds, std::vector<double> c_svm, std::uint64_t seed,
                 const std::string& out) {
    manifest m("classify");
    auto train = train_in.load(m);
    auto test = test_in.load(m);
    if (!label_file.empty()) {
        m.input(label_file);
        std::ifstream f(label_file);
        int v = 0;
        train.labels.clear();
        while (f >> v) train.labels.push_back(v);
    }
    require(train.labels.size() == train.diagrams.size(), "training labels missing or of the wrong count");
    require(!test.diagrams.empty(), "no test diagrams given");
    std::vector<int> y;
    for (int v : train.labels) y.push_back(v == 1 ? 1 : -1);

    std::vector<persistence_diagram> all = train.diagrams;
    all.insert(all.end(), test.diagrams.begin(), test.diagrams.end());
    const std::size_t ntr = train.diagrams.size();
    const auto tr_idx = detail::iota_range(0, ntr), te_idx = detail::iota_range(ntr, all.size());
    const auto specs = resolve_specs(ko, train.diagrams, all, true, m);

    const experiment_options ex;
    std::vector<Eigen::MatrixXd> grams, train_grams;
    std::vector<kernel_spec> chosen_specs;
    for (auto s : specs) {
        const Eigen::MatrixXd inner = inner_gram(all, s, gram_mode::exact());
        if (s.outer == outer_kind::linear) {
            grams.push_back(inner);
            chosen_specs.push_back(s);
            continue;
        }
        std::vector<double> taus;
        if (ko.tau.is_auto()) {
            const double t0 = median_tau(submatrix(inner, tr_idx, tr_idx));
            if (!(t0 > 0.0)) continue;
            for (double f : ex.tau_factors) taus.push_back(t0 * f);
        } else {
            taus = {ko.tau.value("tau")};
        }
        for (double tau : taus) {
            s.tau = tau;
            grams.push_back(apply_outer_gaussian(inner, tau));
            chosen_specs.push_back(s);
        }
    }
    if (grams.empty()) throw numerical_error("median heuristic gives tau = 0 (all embeddings coincide)");
    for (const auto& g : grams) train_grams.push_back(submatrix(g, tr_idx, tr_idx));
    const auto choice = cross_validate(train_grams, y, c_svm, folds, seed);
    const auto& g = grams[choice.gram_index];
    const auto model = svm_train(submatrix(g, tr_idx, tr_idx), y, choice.c_svm);
    const auto pred = svm_predict(model, submatrix(g, te_idx, tr_idx));

    output o(out);
    *o << "id,predicted\n";
    for (std::size_t i = 0; i < pred.size(); ++i) *o << i << ',' << (pred[i] == 1 ? 1 : 0) << '\n';
    if (test.labels.size() == test.diagrams.size()) {
        std::vector<int> yt;
        for (int v : test.labels) yt.push_back(v == 1 ? 1 : -1);
        const double acc = accuracy(pred, yt);
        std::cerr << "test accuracy " << format_real(acc) << '\n';
        m.real("test_accuracy", acc);
    }
    m.param("spec", spec_json(chosen_specs[choice.gram_index]));
    m.real("C_svm", choice.c_svm);
    m.real("cv_accuracy", choice.accuracy);
    m.param("folds", folds);
    m.seed(seed);
    m.emit(out);
    return 0;
}

int run_synth(std::size_t n, std::uint64_t seed, const std::string& outdir) {
    manifest m("synth");
    const auto d = make_synth_dataset(seed, n);
    write_synth_dataset(outdir, d);
    m.param("n", n);
    m.param("outdir", outdir);
    m.seed(seed);
    m.emit((std::filesystem::path(outdir) / "dataset").string());
    return 0;
}

int run_experiment(std::uint64_t seed, const experiment_options& o, const std::string& out) {
    manifest m("experiment-synth");
    const auto rows = run_synth_experiment(seed, o);
    output f(out);
    write_report(*f, rows);
    m.param("n_train", o.n_train);
    m.param("n_test", o.n_test);
    m.param("replicates", o.replicates);
    m.param("folds", o.folds);
    m.param("p", o.p);
    json chosen = json::object();
    for (const auto& r : rows) chosen[r.kernel + "/" + r.weight + "/" + r.outer] = r.chosen;
    m.param("chosen", chosen);
    m.seed(seed);
    m.emit(out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kernel methods on persistence diagrams"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    // diagram
    std::string d_input, d_complex = "cech", d_rmax = "auto", d_out;
    std::vector<int> d_q{1};
    auto* diagram = app.add_subcommand("diagram", "persistence diagram of a point cloud");
    diagram->add_option("cloud", d_input, "point-cloud CSV")->required();
    diagram->add_option("--complex", d_complex, "cech | rips")->check(CLI::IsMember({"cech", "rips"}));
    diagram->add_option("--q", d_q, "homology dimensions (0, 1, 2)")->delimiter(',');
    diagram->add_option("--rmax", d_rmax, "filtration cutoff or auto (diameter)");
    diagram->add_option("--out", d_out, "output diagram CSV (default stdout)");

    // dist
    std::vector<std::string> x_files;
    std::string x_metric = "bottleneck";
    double x_p = 1.0;
    int x_q = -1;
    auto* dist = app.add_subcommand("dist", "distance between two diagrams");
    dist->add_option("diagrams", x_files, "two diagram CSVs")->required()->expected(2);
    dist->add_option("--metric", x_metric, "bottleneck | wasserstein")->check(CLI::IsMember({"bottleneck", "wasserstein"}));
    dist->add_option("--p", x_p, "Wasserstein degree (>= 1, inf allowed)");
    dist->add_option("--q", x_q, "dimension to read when a file holds several");

    // gram
    diagram_inputs g_in;
    kernel_options g_k;
    std::string g_mode = "exact", g_out;
    int g_mrff = 1000;
    std::uint64_t g_seed = 0;
    auto* gram_cmd = app.add_subcommand("gram", "Gram matrix of a diagram collection");
    g_in.add(gram_cmd);
    gram_cmd->add_option("--q", g_in.q, "dimension to read from each diagram file");
    g_k.add(gram_cmd);
    gram_cmd->add_option("--mode", g_mode, "exact | rff")->check(CLI::IsMember({"exact", "rff"}));
    gram_cmd->add_option("--mrff", g_mrff, "number of random frequencies")->check(CLI::PositiveNumber);
    gram_cmd->add_option("--seed", g_seed, "seed for the random frequencies");
    gram_cmd->add_option("--out", g_out, "output Gram CSV (default stdout)");

    // kfdr
    std::string f_gram, f_out;
    double f_gamma = 1e-3;
    auto* kfdr_cmd = app.add_subcommand("kfdr", "KFDR change-point curve of a Gram matrix");
    kfdr_cmd->add_option("--gram", f_gram, "Gram CSV")->required();
    kfdr_cmd->add_option("--gamma", f_gamma, "regularization (> 0)");
    kfdr_cmd->add_option("--out", f_out, "output curve CSV (default stdout)");

    // kpca
    std::string p_gram, p_out;
    int p_k = 2;
    auto* kpca_cmd = app.add_subcommand("kpca", "kernel PCA scores of a Gram matrix");
    kpca_cmd->add_option("--gram", p_gram, "Gram CSV")->required();
    kpca_cmd->add_option("-k", p_k, "number of components");
    kpca_cmd->add_option("--out", p_out, "output scores CSV (default stdout)");

    // classify
    diagram_inputs c_train, c_test;
    kernel_options c_k;
    std::string c_labels, c_out;
    int c_folds = 10;
    std::vector<double> c_svm = experiment_options{}.c_svm;
    std::uint64_t c_seed = 0;
    auto* classify = app.add_subcommand("classify", "SVM with CV-tuned diagram kernel");
    classify->add_option("--train", c_train.dataset, "training dataset directory");
    classify->add_option("--test", c_test.dataset, "test dataset directory");
    classify->add_option("--train-diagrams", c_train.files, "training diagram CSVs");
    classify->add_option("--test-diagrams", c_test.files, "test diagram CSVs");
    classify->add_option("--train-labels", c_labels, "labels (0/1, whitespace separated) for --train-diagrams");
    classify->add_option("--q", c_train.q, "dimension to read from diagram files");
    c_k.add(classify);
    classify->add_option("--cv", c_folds, "number of CV folds")->check(CLI::Range(2, 1000));
    classify->add_option("--csvm", c_svm, "SVM C grid")->delimiter(',');
    classify->add_option("--seed", c_seed, "seed for fold assignment");
    classify->add_option("--out", c_out, "output predictions CSV (default stdout)");

    // synth
    std::size_t s_n = 100;
    std::uint64_t s_seed = 0;
    std::string s_outdir;
    auto* synth = app.add_subcommand("synth", "generate the synthetic circle dataset");
    synth->add_option("--n", s_n, "number of samples");
    synth->add_option("--seed", s_seed, "generator seed");
    synth->add_option("--outdir", s_outdir, "output directory")->required();

    // experiment-synth
    experiment_options e_opt;
    std::uint64_t e_seed = 0;
    std::string e_out;
    auto* experiment = app.add_subcommand("experiment-synth", "synthetic XOR classification benchmark");
    experiment->add_option("--seed", e_seed, "experiment seed");
    experiment->add_option("--replicates", e_opt.replicates, "independent train/test replicates")->check(CLI::PositiveNumber);
    experiment->add_option("--n-train", e_opt.n_train, "training samples per replicate");
    experiment->add_option("--n-test", e_opt.n_test, "test samples per replicate");
    experiment->add_option("--cv", e_opt.folds, "number of CV folds")->check(CLI::Range(2, 1000));
    experiment->add_option("--out", e_out, "report CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*diagram) return run_diagram(d_input, d_complex, d_q, d_rmax, d_out);
        if (*dist) return run_dist(x_files, x_metric, x_p, x_q);
        if (*gram_cmd) return run_gram(g_in, g_k, g_mode, g_mrff, g_seed, g_out);
        if (*kfdr_cmd) return run_kfdr(f_gram, f_gamma, f_out);
        if (*kpca_cmd) return run_kpca(p_gram, p_k, p_out);
        if (*classify) {
            c_test.q = c_train.q;
            return run_classify(c_train, c_test, c_k, c_labels, c_folds, c_svm, c_seed, c_out);
        }
        if (*synth) return run_synth(s_n, s_seed, s_outdir);
        if (*experiment) return run_experiment(e_seed, e_opt, e_out);
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const numerical_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    return exit_usage;
}
