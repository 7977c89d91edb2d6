#include <gtest/gtest.h>

#include <cmath>

#include "softkm/bench.hpp"
#include "softkm/iterate.hpp"
#include "softkm/oracle.hpp"
#include "softkm/seeding.hpp"

using namespace softkm;

namespace {

Dataset line(std::initializer_list<double> xs) {
    Dataset d(1);
    for (double x : xs) d.add(Point{x});
    return d;
}

CenterSet line_centers(std::initializer_list<double> xs) {
    CenterSet c(1);
    for (double x : xs) c.add(Point{x});
    return c;
}

void expect_monotone(const IterationReport& rep) {
    for (std::size_t i = 1; i < rep.potentials.size(); ++i) {
        EXPECT_LE(rep.potentials[i], rep.potentials[i - 1] + 1e-12) << "step " << i;
    }
}

}  // namespace

TEST(StopRule, Validation) {
    StopRule r;
    r.max_iters = 0;
    EXPECT_THROW(r.validate(), Error);
    r.max_iters = 5;
    r.rel_tol = -1;
    EXPECT_THROW(r.validate(), Error);
}

TEST(Lloyd, FixedPointConvergesInOneStep) {
    auto d = line({0, 1, 4, 5});
    auto res = lloyd_run(d, line_centers({0.5, 4.5}));
    EXPECT_EQ(res.report.iterations, 1u);
    EXPECT_TRUE(res.report.converged);
    EXPECT_EQ(res.report.moves.at(0), 0.0);
    EXPECT_EQ(res.centers, line_centers({0.5, 4.5}));
}

TEST(Lloyd, FourPointsFromExtremes) {
    auto res = lloyd_run(line({0, 1, 4, 5}), line_centers({0, 5}));
    EXPECT_DOUBLE_EQ(res.centers.center(0)[0], 0.5);
    EXPECT_DOUBLE_EQ(res.centers.center(1)[0], 4.5);
    EXPECT_DOUBLE_EQ(res.report.final_potential, 1.0);
}

TEST(Lloyd, EmptyClusterKeepsCenter) {
    auto res = lloyd_run(line({0, 1}), line_centers({0.5, 100}));
    EXPECT_EQ(res.centers.center(1)[0], 100.0);
}

TEST(Lloyd, MonotoneOnRandomRuns) {
    for (std::uint64_t s = 0; s < 60; ++s) {
        auto d = bench::synth_mixture(300, 3, 5, 3.0, s);
        Rng rng(s);
        auto res = lloyd_run(d, uniform_seed(d, 6, rng));
        expect_monotone(res.report);
        EXPECT_LE(res.report.final_potential, res.report.initial_potential);
        EXPECT_GE(res.report.iterations, 1u);
    }
}

TEST(Lloyd, BruteForceOptimumIsFixedPoint) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto d = bench::synth_mixture(9, 2, 3, 2.0, s);
        auto opt = oracle::brute_force_kmeans(d, 3);
        auto res = lloyd_run(d, opt.centers);
        EXPECT_EQ(res.report.iterations, 1u);
        EXPECT_NEAR(res.report.final_potential, opt.cost, 1e-12 * (1 + opt.cost));
        EXPECT_LT(max_displacement(res.centers, opt.centers), 1e-12);
    }
}

TEST(Lloyd, EmptyDatasetThrows) { EXPECT_THROW(lloyd_run(Dataset(1), line_centers({0})), EmptyDataset); }

TEST(EM, IdenticalPoints) {
    auto d = line({3, 3, 3});
    auto res = em_run(d, line_centers({3, 3}), SoftParams(0.5));
    EXPECT_EQ(res.report.iterations, 1u);
    EXPECT_TRUE(res.report.converged);
    EXPECT_EQ(res.report.final_potential, 0.0);
    EXPECT_EQ(res.centers, line_centers({3, 3}));
}

TEST(EM, SymmetricDataStaysSymmetric) {
    auto d = Dataset::from_rows({{-5, 1}, {-5, -1}, {-6, 0}, {-4, 0}, {5, 1}, {5, -1}, {6, 0}, {4, 0}});
    for (double m : {0.1, 0.5, 0.9}) {
        auto res = em_run(d, CenterSet::from_rows({{-1, 0}, {1, 0}}), SoftParams(m));
        EXPECT_NEAR(res.centers.center(0)[0] + res.centers.center(1)[0], 0.0, 1e-9);
        EXPECT_NEAR(res.centers.center(0)[1], 0.0, 1e-9);
        EXPECT_NEAR(res.centers.center(1)[1], 0.0, 1e-9);
    }
}

TEST(EM, TwoPointFixedPoint) {
    // Iterating the soft update in mpmath drives the centers onto the points.
    StopRule stop;
    stop.rel_tol = 0.0;
    auto res = em_run(line({0, 10}), line_centers({1, 9}), SoftParams(0.5), stop);
    EXPECT_TRUE(res.report.converged);
    EXPECT_NEAR(res.centers.center(0)[0], 0.0, 1e-12);
    EXPECT_NEAR(res.centers.center(1)[0], 10.0, 1e-12);
    EXPECT_NEAR(res.report.final_potential, 0.0, 1e-12);
}

TEST(EM, TerminatesAndFixedPointHolds) {
    StopRule stop;
    stop.rel_tol = 0.0;
    stop.move_tol = 1e-7;
    stop.max_iters = 2000;
    for (std::uint64_t s = 0; s < 15; ++s) {
        auto d = bench::synth_mixture(150, 2, 3, 6.0, s);
        const SoftParams p(0.2 + 0.05 * static_cast<double>(s % 5));
        Rng rng(s);
        auto res = em_plus_plus(d, 3, p, stop, rng);
        ASSERT_LE(res.report.iterations, stop.max_iters);
        if (res.report.converged) {
            EXPECT_LT(max_displacement(res.centers, em_step(d, res.centers, p)), stop.move_tol);
        }
        EXPECT_EQ(res.report.potentials.size(), res.report.iterations + 1);
    }
}

TEST(EM, MaxItersBackstop) {
    StopRule stop;
    stop.max_iters = 2;
    stop.rel_tol = 0.0;
    stop.move_tol = 0.0;
    auto d = bench::synth_mixture(100, 2, 3, 2.0, 1);
    Rng rng(2);
    auto res = em_random(d, 3, SoftParams(0.5), stop, rng);
    EXPECT_EQ(res.report.iterations, 2u);
    EXPECT_FALSE(res.report.converged);
}

TEST(EMPlusPlus, SingleCenterIsCentroid) {
    auto d = Dataset::from_rows({{0, 0}, {2, 0}, {4, 6}});
    for (std::uint64_t s = 0; s < 5; ++s) {
        Rng rng(s);
        auto res = em_plus_plus(d, 1, SoftParams(0.3), {}, rng);
        EXPECT_NEAR(res.centers.center(0)[0], 2.0, 1e-12);
        EXPECT_NEAR(res.centers.center(0)[1], 2.0, 1e-12);
    }
}

TEST(EMPlusPlus, DeterministicUnderSeed) {
    auto d = bench::synth_mixture(400, 5, 6, 5.0, 4);
    Rng a(10), b(10);
    auto r1 = em_plus_plus(d, 6, SoftParams(0.25), {}, a);
    auto r2 = em_plus_plus(d, 6, SoftParams(0.25), {}, b);
    EXPECT_EQ(r1.centers, r2.centers);
    EXPECT_EQ(r1.report.iterations, r2.report.iterations);
    EXPECT_EQ(r1.report.potentials, r2.report.potentials);
}

TEST(EM, FinalPotentialIsSoftCost) {
    auto d = bench::synth_mixture(200, 3, 4, 4.0, 8);
    Rng rng(3);
    const SoftParams p(0.4);
    auto res = em_plus_plus(d, 4, p, {}, rng);
    EXPECT_DOUBLE_EQ(res.report.final_potential, soft_cost(d, res.centers, p));
}
