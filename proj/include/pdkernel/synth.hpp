#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ball_model.hpp"
#include "geometry.hpp"
#include "parallel.hpp"
#include "persistence.hpp"
#include "rng.hpp"

namespace pdk {

struct synth_sample {
    point_cloud cloud;
    int z0 = 0;
    int z1 = 0;
    int label = 0;  // z0 xor z1
};

namespace detail {

// circle_points(x, y, r, n) lifted to R^3 with heights drawn from U[0, 0.01].
inline point_cloud noisy_circle(double x, double y, double r, int n, counter_rng& rng) {
    point_cloud c = lift(circle_points(x, y, r, n), 3);
    std::uniform_real_distribution<double> height(0.0, 0.01);
    for (auto& p : c.points) p[2] = height(rng);
    return c;
}

struct circle_draw {
    double x, y, r;
    int n;
};

inline circle_draw draw_main_circle(counter_rng& rng) {
    std::normal_distribution<double> unit(0.0, 1.0), wide(0.0, std::sqrt(2.0));
    const double w = unit(rng);
    const double r1 = 1.0 + 8.0 * w * w;
    const double x1 = 1.5 * r1, y1 = 1.5 * r1;
    // Integers strictly inside (ceil(pi r1 / 2), 4 pi r1).
    const int lo = static_cast<int>(std::ceil(std::numbers::pi * r1 / 2.0)) + 1;
    const int hi = static_cast<int>(std::ceil(4.0 * std::numbers::pi * r1)) - 1;
    const int n1 = std::uniform_int_distribution<int>(lo, hi)(rng);

    const double wx = wide(rng), wy = wide(rng), wr = unit(rng);
    int n = 0;
    do n = static_cast<int>(std::ceil(n1 + 2.0 * unit(rng)));
    while (n < 3);
    return {x1 + wx * wx, y1 + wy * wy, r1 + wr * wr, n};
}

}  // namespace detail

// The largest-persistence loop of the main circle decides z0: born before 1, dies after 4.
inline int main_loop_flag(const persistence_diagram& s1_loops) {
    const persistence_pair* best = nullptr;
    for (const auto& x : s1_loops.pairs)
        if (!best || x.persistence() > best->persistence()) best = &x;
    return best && best->birth < 1.0 && best->death > 4.0 ? 1 : 0;
}

// The random clouds of one sample before any persistence is computed.
struct synth_draw {
    point_cloud s1;
    bool with_s2 = false;
    point_cloud s2;  // drawn only when with_s2

    point_cloud cloud() const {
        point_cloud c = s1;
        if (with_s2) c.points.insert(c.points.end(), s2.points.begin(), s2.points.end());
        return c;
    }
};

inline synth_draw draw_synth_clouds(counter_rng& rng) {
    const auto c = detail::draw_main_circle(rng);
    synth_draw d;
    d.s1 = detail::noisy_circle(c.x, c.y, c.r, c.n, rng);
    d.with_s2 = std::bernoulli_distribution(0.5)(rng);
    if (d.with_s2) d.s2 = detail::noisy_circle(0.0, 0.0, 0.2, 10, rng);
    return d;
}

// One labelled sample. When `loops` is given it receives the H1 Cech diagram of the cloud.
inline synth_sample draw_synth_sample(counter_rng& rng, persistence_diagram* loops = nullptr) {
    const auto d = draw_synth_clouds(rng);
    synth_sample s;
    s.cloud = d.cloud();
    const auto s1_loops = fast_persistence(d.s1, 1);
    s.z0 = main_loop_flag(s1_loops);
    s.z1 = d.with_s2 ? 1 : 0;
    s.label = s.z0 ^ s.z1;
    if (loops) *loops = s.z1 ? fast_persistence(s.cloud, 1) : s1_loops;
    return s;
}

// Sample i of a dataset draws from its own stream, so datasets are prefix-stable in n.
inline synth_sample synth_sample_at(std::uint64_t seed, std::size_t i, persistence_diagram* loops = nullptr) {
    counter_rng rng = counter_rng(seed).split(i);
    return draw_synth_sample(rng, loops);
}

struct synth_dataset {
    std::vector<synth_sample> samples;
    std::vector<persistence_diagram> diagrams;  // H1, one per sample
};

inline synth_dataset make_synth_dataset(std::uint64_t seed, std::size_t n) {
    synth_dataset d;
    d.samples.resize(n);
    d.diagrams.resize(n);
    parallel_for(n, [&](std::size_t i) { d.samples[i] = synth_sample_at(seed, i, &d.diagrams[i]); });
    return d;
}

// Layout: <dir>/<id>/cloud.csv, <dir>/<id>/diagram.csv and <dir>/labels.csv (`id,z0,z1,label`).
inline void write_synth_dataset(const std::string& dir, const synth_dataset& d) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create " + dir + ": " + ec.message());
    std::ofstream labels(fs::path(dir) / "labels.csv");
    if (!labels) throw io_error("cannot write " + (fs::path(dir) / "labels.csv").string());
    labels << "id,z0,z1,label\n";
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        const auto sub = fs::path(dir) / std::to_string(i);
        fs::create_directories(sub, ec);
        if (ec) throw io_error("cannot create " + sub.string() + ": " + ec.message());
        write_point_cloud((sub / "cloud.csv").string(), d.samples[i].cloud);
        write_diagram((sub / "diagram.csv").string(), d.diagrams[i]);
        const auto& s = d.samples[i];
        labels << i << ',' << s.z0 << ',' << s.z1 << ',' << s.label << '\n';
    }
}

struct labelled_diagrams {
    std::vector<persistence_diagram> diagrams;
    std::vector<int> labels;  // 0/1
};

// Reads back the diagrams and labels of a dataset written by write_synth_dataset.
inline labelled_diagrams read_synth_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    const auto path = fs::path(dir) / "labels.csv";
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path.string());
    labelled_diagrams out;
    std::string line;
    std::getline(in, line);
    if (line.rfind("id,z0,z1,label", 0) != 0) throw std::invalid_argument(path.string() + ":1: bad header");
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        int id = 0, z0 = 0, z1 = 0, label = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%d,%d", &id, &z0, &z1, &label) != 4)
            throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) + ": expected id,z0,z1,label");
        require(label == 0 || label == 1, path.string() + ":" + std::to_string(line_no) + ": label must be 0 or 1");
        out.diagrams.push_back(read_diagram((fs::path(dir) / std::to_string(id) / "diagram.csv").string(), 1));
        out.labels.push_back(label);
    }
    return out;
}

}  // namespace pdk
