#include <gtest/gtest.h>

#include <cmath>
#include <deque>

#include "softkm/bench.hpp"
#include "softkm/seeding.hpp"
#include "softkm/stream_window.hpp"

using namespace softkm;

namespace {

WindowConfig config(std::size_t window, std::size_t k, double eps, std::uint64_t seed = 3) {
    WindowConfig c;
    c.window = window;
    c.k = k;
    c.epsilon = eps;
    c.seed = seed;
    return c;
}

Dataset to_dataset(const std::deque<Point>& ring, std::size_t dim) {
    Dataset d(dim);
    for (const auto& p : ring) d.add(p);
    return d;
}

}  // namespace

TEST(WindowConfig, DerivedSizes) {
    auto c = config(2000, 4, 1.0 / 3.0);
    EXPECT_EQ(c.levels(), 2u);
    EXPECT_EQ(c.block_size(), 24u);
    // 2000^{1/3} * 24^{2/3} = 104.8...
    EXPECT_EQ(c.shift(), 105u);
    EXPECT_EQ(c.block_points(), 24u);
    EXPECT_EQ(c.level_capacity(), 51u);
    EXPECT_FALSE(c.exact_mode());

    EXPECT_EQ(config(100, 1, 0.25).block_size(), 1u);
    EXPECT_EQ(config(100, 1, 0.25).levels(), 3u);
    EXPECT_EQ(config(100, 5, 0.45).levels(), 1u);
    EXPECT_THROW(config(100, 2, 0.5).validate(), Error);
    EXPECT_THROW(config(0, 2, 0.3).validate(), Error);
    auto no_runs = config(100, 2, 0.3);
    no_runs.query_runs = 0;
    EXPECT_THROW(no_runs.validate(), Error);
}

TEST(SlidingWindow, BeforeFirstBlockQueryMatchesBatch) {
    auto cfg = config(2000, 4, 1.0 / 3.0);
    SlidingWindowStream w(cfg, 2);
    auto d = bench::synth_mixture(40, 2, 4, 5.0, 1);
    for (std::size_t i = 0; i < d.size(); ++i) w.insert(d.point(i));
    EXPECT_TRUE(w.blocks().empty());
    Rng a(5), b(5);
    EXPECT_EQ(w.query(a), kmeanspp_seed(d, 4, b).centers);
}

TEST(SlidingWindow, TinyWindowIsExactRingBuffer) {
    auto cfg = config(20, 4, 1.0 / 3.0);  // L < B = 24
    ASSERT_TRUE(cfg.exact_mode());
    SlidingWindowStream w(cfg, 2);
    auto d = bench::synth_mixture(200, 2, 4, 5.0, 2);
    std::deque<Point> ring;
    for (std::size_t i = 0; i < d.size(); ++i) {
        w.insert(d.point(i));
        ring.push_back(d.at(i).point);
        if (ring.size() > 20) ring.pop_front();
        if (i % 17 == 0) {
            Rng a(i), b(i);
            ASSERT_EQ(w.query(a), kmeanspp_seed(to_dataset(ring, 2), 4, b).centers);
        }
    }
}

TEST(SlidingWindow, OldestBlockDroppedAfterLPlusS) {
    auto cfg = config(500, 3, 1.0 / 3.0);
    const std::size_t shift = cfg.shift();
    SlidingWindowStream w(cfg, 2);
    auto d = bench::synth_mixture(500 + shift, 2, 3, 5.0, 3);
    for (std::size_t i = 0; i < d.size(); ++i) w.insert(d.point(i));
    ASSERT_FALSE(w.blocks().empty());
    EXPECT_GT(w.blocks().front().first, 0u);
    for (const auto& b : w.blocks()) EXPECT_GE(b.last, w.window_start());
}

TEST(SlidingWindow, ReplayAgainstRingBuffer) {
    for (double eps : {1.0 / 3.0, 0.25, 0.45}) {
        auto cfg = config(600, 3, eps);
        const std::size_t shift = cfg.shift();
        SlidingWindowStream w(cfg, 3);
        auto d = bench::synth_mixture(4 * 600 + 37, 3, 4, 5.0, 4);
        for (std::size_t i = 0; i < d.size(); ++i) {
            w.insert(d.point(i));
            const double expected = static_cast<double>(std::min<std::size_t>(i + 1, 600));
            const double covered = w.covered_weight();
            if (i + 1 >= 600) {
                ASSERT_GE(covered, 600.0 - static_cast<double>(shift));
                ASSERT_LE(covered, 600.0);
            }
            // Linear down-weighting recovers the surviving count exactly.
            ASSERT_NEAR(w.snapshot().total_weight(), expected, 1e-9);
            if (w.at_checkpoint()) {
                ASSERT_EQ(w.snapshot().total_weight(), expected);
                ASSERT_EQ(covered, expected);
                if (!w.blocks().empty() && i + 1 >= 600) ASSERT_EQ(w.blocks().front().first, w.window_start());
            }
            ASSERT_LE(w.live_points(), cfg.memory_bound());
            // Spans are sorted, contiguous and disjoint.
            for (std::size_t b = 1; b < w.blocks().size(); ++b) {
                ASSERT_EQ(w.blocks()[b].first, w.blocks()[b - 1].last + 1);
            }
            for (const auto& b : w.blocks()) ASSERT_EQ(b.points.total_weight(), static_cast<double>(b.span()));
        }
    }
}

TEST(SlidingWindow, CheckpointQualityAgainstBatch) {
    const std::size_t L = 1000;
    auto cfg = config(L, 4, 1.0 / 3.0, 11);
    cfg.query_runs = 10;
    SlidingWindowStream w(cfg, 3);
    auto d = bench::synth_mixture(3 * L, 3, 4, 6.0, 5);
    std::deque<Point> ring;
    for (std::size_t i = 0; i < d.size(); ++i) {
        w.insert(d.point(i));
        ring.push_back(d.at(i).point);
        if (ring.size() > L) ring.pop_front();
        if (!w.at_checkpoint() || i + 1 < L) continue;
        const Dataset exact = to_dataset(ring, 3);
        Rng q(i);
        const double stream_cost = hard_cost(exact, w.query(q));
        Rng b(i + 1);
        const auto best = best_of(
            10, [](const Dataset& data, Rng& r) { return kmeanspp_seed(data, 4, r); }, exact, b);
        EXPECT_LE(stream_cost, 10.0 * best.cost) << "at " << i + 1;
    }
}

TEST(SlidingWindow, Errors) {
    SlidingWindowStream w(config(100, 2, 0.3), 2);
    Rng rng(1);
    EXPECT_THROW(w.query(rng), EmptyDataset);
    EXPECT_THROW(w.insert(Point{1.0}), DimensionMismatch);
}

TEST(SlidingWindow, Deterministic) {
    auto d = bench::synth_mixture(1500, 2, 3, 5.0, 6);
    auto run = [&] {
        SlidingWindowStream w(config(400, 3, 0.3, 8), 2);
        for (std::size_t i = 0; i < d.size(); ++i) w.insert(d.point(i));
        Rng rng(2);
        return w.query(rng, true);
    };
    EXPECT_EQ(run(), run());
}
