#include <gtest/gtest.h>

#include <cmath>

#include "softkm/bench.hpp"
#include "softkm/iterate.hpp"
#include "softkm/oracle.hpp"
#include "softkm/seeding.hpp"

using namespace softkm;
using namespace softkm::oracle;

TEST(BruteForce, DistinctPointsEqualToK) {
    auto d = Dataset::from_rows({{0, 0}, {3, 1}, {-2, 5}});
    auto r = brute_force_kmeans(d, 3);
    EXPECT_EQ(r.cost, 0.0);
    EXPECT_EQ(r.centers.size(), 3u);
}

TEST(BruteForce, FourPointLine) {
    auto d = Dataset::from_rows({{0}, {1}, {4}, {5}});
    auto r = brute_force_kmeans(d, 2);
    EXPECT_DOUBLE_EQ(r.cost, 1.0);
    EXPECT_EQ(r.assignment, (std::vector<std::size_t>{0, 0, 1, 1}));
    EXPECT_DOUBLE_EQ(r.centers.center(0)[0], 0.5);
    EXPECT_DOUBLE_EQ(r.centers.center(1)[0], 4.5);
}

TEST(BruteForce, GuardsLargeInstances) {
    Dataset d(1);
    for (int i = 0; i < 16; ++i) d.add(Point{static_cast<double>(i)});
    EXPECT_THROW(brute_force_kmeans(d, 3), Error);
}

TEST(BruteForce, NeverBeatenByOtherModules) {
    for (std::uint64_t s = 0; s < 40; ++s) {
        auto d = bench::synth_mixture(10, 2, 3, 1.5, s);
        const std::size_t k = 2 + s % 2;
        auto opt = brute_force_kmeans(d, k);
        Rng rng(s);
        auto seeded = kmeanspp_seed(d, k, rng).centers;
        EXPECT_LE(opt.cost, hard_cost(d, seeded) * (1 + 1e-12));
        EXPECT_LE(opt.cost, lloyd_run(d, seeded).report.final_potential * (1 + 1e-12));
    }
}

TEST(BruteForce, WeightedPointsCountAsCopies) {
    Dataset weighted(1), copies(1);
    weighted.add(Point{0.0}, 3.0);
    weighted.add(Point{1.0});
    weighted.add(Point{10.0});
    for (int i = 0; i < 3; ++i) copies.add(Point{0.0});
    copies.add(Point{1.0});
    copies.add(Point{10.0});
    EXPECT_NEAR(brute_force_kmeans(weighted, 2).cost, brute_force_kmeans(copies, 2).cost, 1e-12);
}

TEST(PowerMean, EqualityAndSingleEntry) {
    for (double p : {1.0, 1.5, 3.0, 11.0}) {
        std::vector<double> ones(7, 1.0);
        EXPECT_TRUE(power_mean_check(ones, p));
        std::vector<double> single{0, 0, 4.2, 0};
        EXPECT_TRUE(power_mean_check(single, p));
    }
}

TEST(PowerMean, RandomSweep) {
    Rng rng(2024);
    for (int t = 0; t < 100000; ++t) {
        const std::size_t k = 1 + rng.below(10);
        std::vector<double> a(k);
        for (auto& v : a) v = rng.uniform() * std::pow(10.0, 4 * rng.uniform() - 2);
        const double p = 1.0 + 10.0 * rng.uniform();
        ASSERT_TRUE(power_mean_check(a, p)) << "trial " << t;
    }
}

TEST(Sandwich, SingleCenterRatioOne) {
    auto d = bench::synth_mixture(50, 3, 2, 4.0, 1);
    auto c = CenterSet::from_rows({{1, 2, 3}});
    auto r = sandwich_check(d, c, SoftParams(0.3));
    EXPECT_TRUE(r.lower_ok);
    EXPECT_TRUE(r.upper_ok);
    EXPECT_EQ(r.ratio, 1.0);
}

TEST(Sandwich, CoincidentPoints) {
    auto d = Dataset::from_rows({{0, 0}, {1, 1}, {0, 0}});
    auto c = CenterSet::from_rows({{0, 0}, {1, 1}});
    auto r = sandwich_check(d, c, SoftParams(0.5));
    EXPECT_TRUE(r.lower_ok);
    EXPECT_TRUE(r.upper_ok);
    EXPECT_EQ(r.ratio, 1.0);
}

TEST(Sandwich, RandomInstancesHold) {
    Rng rng(31);
    const double ms[] = {0.1, 0.25, 0.5, 0.9};
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t d = 1 + rng.below(5);
        const std::size_t n = 1 + rng.below(60);
        const std::size_t k = 2 + rng.below(7);
        Dataset data(d);
        Point x(d);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& v : x) v = 10 * rng.uniform();
            data.add(x);
        }
        CenterSet c(d);
        for (std::size_t i = 0; i < k; ++i) {
            for (auto& v : x) v = 10 * rng.uniform();
            c.add(x);
        }
        const SoftParams p(ms[t % 4]);
        auto r = sandwich_check(data, c, p);
        ASSERT_TRUE(r.lower_ok && r.upper_ok) << "trial " << t;
        worst = std::max(worst, r.ratio / r.bound);
    }
    EXPECT_LE(worst, 1.0);
}
