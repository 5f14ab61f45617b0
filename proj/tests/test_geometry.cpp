#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pdkernel/ball_model.hpp"
#include "pdkernel/filtration.hpp"
#include "pdkernel/geometry.hpp"
#include "pdkernel/synth.hpp"

using namespace pdk;

TEST(CirclePoints, UnitSquareConfiguration) {
    const auto c = circle_points(0, 0, 1, 4);
    ASSERT_EQ(c.size(), 4u);
    EXPECT_EQ(c.dim, 2);
    const double expect[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(c.points[i][0], expect[i][0], 1e-15);
        EXPECT_NEAR(c.points[i][1], expect[i][1], 1e-15);
    }
}

TEST(CirclePoints, TriangleChords) {
    const auto c = circle_points(2, 3, 1, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) EXPECT_NEAR(distance(c.points[i], c.points[j]), std::sqrt(3.0), 1e-12);
}

TEST(CirclePoints, SmallCircleConfiguration) {
    const auto c = circle_points(0, 0, 0.2, 10);
    ASSERT_EQ(c.size(), 10u);
    for (const auto& p : c.points) EXPECT_NEAR(std::hypot(p[0], p[1]), 0.2, 1e-12);
}

TEST(CirclePoints, AllPointsOnCircle) {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(-5, 5), ur(0.01, 10);
    for (int trial = 0; trial < 100; ++trial) {
        const double x = u(g), y = u(g), r = ur(g);
        const int n = 3 + trial % 50;
        for (const auto& p : circle_points(x, y, r, n).points) EXPECT_NEAR(std::hypot(p[0] - x, p[1] - y), r, 1e-12 * std::max(1.0, r));
    }
}

TEST(CirclePoints, RejectsBadInput) {
    EXPECT_THROW(circle_points(0, 0, 1, 2), std::invalid_argument);
    EXPECT_THROW(circle_points(0, 0, 0, 5), std::invalid_argument);
    EXPECT_THROW(circle_points(0, 0, -1, 5), std::invalid_argument);
}

TEST(Hausdorff, Examples) {
    std::mt19937_64 g(5);
    const auto x = oracle::random_cloud(g, 10);
    EXPECT_EQ(hausdorff_distance(x, x), 0.0);
    point_cloud a, b;
    a.points = {{0, 0, 0}};
    b.points = {{3, 4, 0}};
    EXPECT_DOUBLE_EQ(hausdorff_distance(a, b), 5.0);
}

TEST(Hausdorff, MatchesDoubleLoop) {
    std::mt19937_64 g(6);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = oracle::random_cloud(g, 10), y = oracle::random_cloud(g, 10);
        double xy = 0, yx = 0;
        for (const auto& p : x.points) {
            double m = INFINITY;
            for (const auto& q : y.points) m = std::min(m, std::sqrt(std::pow(p[0] - q[0], 2) + std::pow(p[1] - q[1], 2) + std::pow(p[2] - q[2], 2)));
            xy = std::max(xy, m);
        }
        for (const auto& q : y.points) {
            double m = INFINITY;
            for (const auto& p : x.points) m = std::min(m, std::sqrt(std::pow(p[0] - q[0], 2) + std::pow(p[1] - q[1], 2) + std::pow(p[2] - q[2], 2)));
            yx = std::max(yx, m);
        }
        EXPECT_NEAR(hausdorff_distance(x, y), std::max(xy, yx), 1e-15);
    }
}

TEST(Hausdorff, SymmetricAndTriangle) {
    std::mt19937_64 g(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = oracle::random_cloud(g, 1 + trial % 12), y = oracle::random_cloud(g, 1 + trial % 7),
                   z = oracle::random_cloud(g, 2 + trial % 9);
        EXPECT_EQ(hausdorff_distance(x, y), hausdorff_distance(y, x));
        EXPECT_LE(hausdorff_distance(x, z), hausdorff_distance(x, y) + hausdorff_distance(y, z) + 1e-15);
    }
}

TEST(Hausdorff, RejectsEmptyAndMismatch) {
    point_cloud a, b, c;
    a.points = {{0, 0, 0}};
    c.dim = 3;
    c.points = {{0, 0, 1}};
    EXPECT_THROW(hausdorff_distance(a, b), std::invalid_argument);
    EXPECT_THROW(hausdorff_distance(a, c), std::invalid_argument);
}

TEST(PointCloudCsv, RoundTrip) {
    std::mt19937_64 g(8);
    const auto x = oracle::random_cloud(g, 12);
    std::stringstream ss;
    write_point_cloud(ss, x);
    const auto y = parse_point_cloud(ss);
    EXPECT_EQ(y.dim, 3);
    EXPECT_EQ(y.points, x.points);
}

TEST(PointCloudCsv, RejectsMalformed) {
    std::stringstream bad("1,2\n3\n");
    EXPECT_THROW(parse_point_cloud(bad), std::invalid_argument);
    std::stringstream empty("");
    EXPECT_THROW(parse_point_cloud(empty), std::invalid_argument);
}

TEST(Synth, Deterministic) {
    persistence_diagram d1, d2;
    const auto a = synth_sample_at(11, 3, &d1), b = synth_sample_at(11, 3, &d2);
    EXPECT_EQ(a.cloud.points, b.cloud.points);
    EXPECT_EQ(a.label, b.label);
    EXPECT_EQ(d1, d2);
    EXPECT_EQ(a.label, a.z0 ^ a.z1);
}

TEST(Synth, BernoulliFraction) {
    counter_rng root(2024);
    int with = 0;
    for (int i = 0; i < 1000; ++i) {
        auto rng = root.split(static_cast<std::uint64_t>(i));
        with += draw_synth_clouds(rng).with_s2;
    }
    EXPECT_GE(with / 1000.0, 0.45);
    EXPECT_LE(with / 1000.0, 0.55);
}

TEST(Synth, SmallCircleAddsPoints) {
    counter_rng root(99);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 20; ++i) {
        auto rng = root.split(static_cast<std::uint64_t>(i));
        const auto d = draw_synth_clouds(rng);
        if (!d.with_s2) continue;
        ++checked;
        EXPECT_EQ(d.cloud().size(), d.s1.size() + 10);
        EXPECT_GE(d.cloud().size(), d.s1.size() + 3);
        for (const auto& p : d.s2.points) {
            EXPECT_NEAR(std::hypot(p[0], p[1]), 0.2, 1e-12);
            EXPECT_GE(p[2], 0.0);
            EXPECT_LE(p[2], 0.01);
        }
    }
    EXPECT_EQ(checked, 20);
}

TEST(Synth, MainCircleShape) {
    counter_rng root(5);
    for (int i = 0; i < 200; ++i) {
        auto rng = root.split(static_cast<std::uint64_t>(i));
        const auto d = draw_synth_clouds(rng);
        EXPECT_GE(d.s1.size(), 3u);
        EXPECT_EQ(d.s1.dim, 3);
        // Centre lies at (1.5 r1 + Wx^2, 1.5 r1 + Wy^2) with r1 >= 1, so far from the small circle.
        double cx = 0, cy = 0;
        for (const auto& p : d.s1.points) {
            cx += p[0];
            cy += p[1];
            EXPECT_GE(p[2], 0.0);
            EXPECT_LE(p[2], 0.01);
        }
        cx /= static_cast<double>(d.s1.size());
        cy /= static_cast<double>(d.s1.size());
        EXPECT_GE(cx, 1.5 - 1e-9);
        EXPECT_GE(cy, 1.5 - 1e-9);
    }
}

TEST(Synth, MainLoopFlagFromExplicitReduction) {
    counter_rng root(77);
    for (int i = 0; i < 40; ++i) {
        auto rng = root.split(static_cast<std::uint64_t>(i));
        const auto d = draw_synth_clouds(rng);
        if (d.s1.size() > 45) continue;  // keep the explicit complex small
        const auto loops = compute_persistence(build_cech(d.s1, 1), 1);
        const persistence_pair* best = nullptr;
        for (const auto& x : loops.pairs)
            if (!best || x.persistence() > best->persistence()) best = &x;
        const int z0 = best && best->birth < 1.0 && best->death > 4.0;
        auto again = root.split(static_cast<std::uint64_t>(i));
        const auto s = draw_synth_sample(again);
        EXPECT_EQ(s.z0, z0);
        EXPECT_EQ(s.z1, d.with_s2 ? 1 : 0);
    }
}

TEST(Synth, BothZ0ValuesOccur) {
    int ones = 0;
    for (std::size_t i = 0; i < 60; ++i) ones += synth_sample_at(1, i).z0;
    EXPECT_GT(ones, 0);
    EXPECT_LT(ones, 60);
}

TEST(Synth, DatasetRoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "pdkernel_synth_rt";
    std::filesystem::remove_all(dir);
    const auto ds = make_synth_dataset(4, 6);
    write_synth_dataset(dir.string(), ds);
    const auto back = read_synth_dataset(dir.string());
    ASSERT_EQ(back.diagrams.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(back.labels[i], ds.samples[i].label);
        EXPECT_EQ(back.diagrams[i].pairs, ds.diagrams[i].pairs);
        EXPECT_EQ(read_point_cloud((dir / std::to_string(i) / "cloud.csv").string()).points, ds.samples[i].cloud.points);
    }
    std::filesystem::remove_all(dir);
}
