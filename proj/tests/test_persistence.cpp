#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pdkernel/ball_model.hpp"
#include "pdkernel/filtration.hpp"
#include "pdkernel/persistence.hpp"

using namespace pdk;

namespace {

point_cloud equilateral(double s) {
    point_cloud x;
    x.points = {{0, 0, 0}, {s, 0, 0}, {s / 2, s * std::sqrt(3.0) / 2, 0}};
    return x;
}

persistence_diagram diagram_of(std::vector<persistence_pair> pairs, int q = 1) {
    persistence_diagram d;
    d.q = q;
    d.pairs = std::move(pairs);
    d.normalize();
    return d;
}

void expect_same(const persistence_diagram& a, const persistence_diagram& b, double tol = 0.0) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a.pairs[i].birth, b.pairs[i].birth, tol);
        EXPECT_NEAR(a.pairs[i].death, b.pairs[i].death, tol);
    }
}

}  // namespace

TEST(Persistence, CechTriangleLoop) {
    const double s = 2.0;
    const auto d = compute_persistence(build_cech(equilateral(s), 1), 1);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_NEAR(d.pairs[0].birth, s / 2, 1e-12);
    EXPECT_NEAR(d.pairs[0].death, s / std::sqrt(3.0), 1e-12);
}

TEST(Persistence, RipsTriangleHasNoLoop) {
    EXPECT_TRUE(compute_persistence(build_rips(equilateral(1.3), 1), 1).empty());
}

TEST(Persistence, CircleGolden) {
    for (auto [r, n] : {std::pair{1.0, 10}, {2.0, 25}, {0.2, 10}, {3.0, 7}}) {
        const auto d = compute_persistence(build_cech(circle_points(0, 0, r, n), 1), 1);
        ASSERT_EQ(d.size(), 1u);
        EXPECT_NEAR(d.pairs[0].birth, r * std::sin(std::numbers::pi / n), 1e-9);
        EXPECT_NEAR(d.pairs[0].death, r, 1e-9);
    }
    const double b = std::sin(std::numbers::pi / 25), approx = std::numbers::pi / 25;
    EXPECT_LT(std::abs(b - approx) / approx, 0.02);
}

TEST(Persistence, H0OfTwoClusters) {
    point_cloud x;
    x.points = {{0, 0, 0}, {0.1, 0, 0}, {5, 0, 0}, {5.2, 0, 0}};
    const auto d = compute_persistence(build_rips(x, 0), 0);
    const auto want = diagram_of({{0, 0.05}, {0, 0.1}, {0, 2.45}}, 0);
    expect_same(d, want, 1e-12);
}

TEST(Persistence, EssentialClassBelowCutoff) {
    EXPECT_THROW(compute_persistence(build_cech(circle_points(0, 0, 1, 8), 1, 0.9), 1), essential_class_error);
}

TEST(Persistence, TranscriptUsesEachSimplexOnce) {
    std::mt19937_64 g(30);
    const auto fc = build_cech(oracle::random_cloud(g, 10), 2);
    const auto tr = reduce_boundary(fc);
    std::vector<int> seen(fc.simplices.size(), 0);
    for (auto [b, d] : tr.pairing) {
        ++seen[b];
        ++seen[d];
        EXPECT_EQ(fc.simplices[d].dim, fc.simplices[b].dim + 1);
    }
    for (int e : tr.essential) ++seen[e];
    for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(Persistence, TieBreakInvariance) {
    std::mt19937_64 g(31);
    for (int trial = 0; trial < 30; ++trial) {
        // Grid points create many equal filtration values.
        point_cloud x;
        std::uniform_int_distribution<int> u(0, 4);
        for (int i = 0; i < 10; ++i) x.points.push_back({double(u(g)), double(u(g)), 0.0});
        std::sort(x.points.begin(), x.points.end());
        x.points.erase(std::unique(x.points.begin(), x.points.end()), x.points.end());
        if (x.size() < 3) continue;
        for (bool cech : {true, false}) {
            auto fc = cech ? build_cech(x, 2) : build_rips(x, 2);
            auto other = fc;
            sort_filtration(other, tie_break::reverse_lexicographic);
            for (int q = 0; q <= 2; ++q) EXPECT_EQ(compute_persistence(fc, q), compute_persistence(other, q));
        }
    }
}

TEST(Persistence, BettiConsistency) {
    std::mt19937_64 g(32);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 6 + trial % 5;
        const auto x = oracle::random_cloud(g, n, 2 + trial % 2);
        const auto fc = build_cech(x, 1);
        const auto all = oracle::cech_simplices(x, 2);
        std::vector<double> crit;
        for (const auto& s : fc.simplices) crit.push_back(s.value);
        std::sort(crit.begin(), crit.end());
        crit.erase(std::unique(crit.begin(), crit.end()), crit.end());
        for (int q = 0; q <= 1; ++q) {
            const auto d = compute_persistence(fc, q);
            for (std::size_t c = 0; c + 1 < crit.size(); ++c) {
                const double a = 0.5 * (crit[c] + crit[c + 1]);
                int alive = 0;
                for (const auto& p : d.pairs) alive += p.birth <= a && a < p.death;
                EXPECT_EQ(alive, oracle::betti(all, q, a)) << "q=" << q << " a=" << a;
            }
        }
    }
}

TEST(Persistence, ImplicitMatchesExplicit) {
    std::mt19937_64 g(33);
    for (int trial = 0; trial < 40; ++trial) {
        const auto x = oracle::random_cloud(g, 6 + trial % 20, 2 + trial % 2);
        for (auto kind : {complex_kind::cech, complex_kind::rips}) {
            const auto fc = kind == complex_kind::cech ? build_cech(x, 1) : build_rips(x, 1);
            const auto tr = reduce_boundary(fc);
            for (std::size_t sw : {std::size_t{0}, std::size_t{3}, std::size_t{256}}) {
                implicit_persistence ip(x, kind);
                ip.set_dense_switch(sw);
                EXPECT_EQ(ip.diagram(0), compute_persistence(fc, 0, tr));
                EXPECT_EQ(ip.diagram(1), compute_persistence(fc, 1, tr));
            }
        }
    }
}

TEST(Persistence, ImplicitMatchesExplicitWithCutoff) {
    std::mt19937_64 g(34);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = oracle::random_cloud(g, 15);
        const double rmax = 0.8 * diameter(x);
        const auto fc = build_rips(x, 1, rmax);
        implicit_persistence ip(x, complex_kind::rips, rmax);
        EXPECT_EQ(ip.diagram(1), compute_persistence(fc, 1));
    }
}

TEST(Persistence, ImplicitOnSynthScaleCircle) {
    const auto d = fast_persistence(lift(circle_points(0, 0, 5, 120), 3), 1);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_NEAR(d.pairs[0].birth, 5 * std::sin(std::numbers::pi / 120), 1e-9);
    EXPECT_NEAR(d.pairs[0].death, 5.0, 1e-9);
}

TEST(TotalPersistence, Examples) {
    EXPECT_EQ(total_persistence(persistence_diagram{}, 1), 0.0);
    const auto d = diagram_of({{0, 1}, {0, 2}});
    EXPECT_DOUBLE_EQ(total_persistence(d, 2, 0), 5.0);
    EXPECT_DOUBLE_EQ(total_persistence(d, 1, 1.5), 2.0);
    EXPECT_THROW(total_persistence(d, 0.5), std::invalid_argument);
}

TEST(TotalPersistence, PowerMeanMonotone) {
    std::mt19937_64 g(35);
    std::uniform_real_distribution<double> up(1.0, 6.0);
    for (int trial = 0; trial < 500; ++trial) {
        const auto d = oracle::random_diagram(g, 1 + trial % 15, 2.0, 3.0);
        double p = up(g), q = up(g);
        if (p > q) std::swap(p, q);
        EXPECT_LE(std::pow(total_persistence(d, q), 1 / q), std::pow(total_persistence(d, p), 1 / p) * (1 + 1e-12));
    }
}

TEST(DiagramCsv, RoundTripAndSort) {
    std::mt19937_64 g(36);
    auto a = oracle::random_diagram(g, 7, 1, 1, 0), b = oracle::random_diagram(g, 5, 1, 1, 1);
    std::stringstream ss;
    write_diagrams(ss, {b, a});
    const auto back = parse_diagrams(ss);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0], a);
    EXPECT_EQ(back[1], b);
}

TEST(DiagramCsv, RejectsBadRows) {
    for (const char* text : {"1,0.5,0.2\n", "1,a,2\n", "1,0,1,2\n", "1,0\n"}) {
        std::stringstream ss(text);
        EXPECT_THROW(parse_diagrams(ss), std::invalid_argument) << text;
    }
}
