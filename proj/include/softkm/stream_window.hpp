#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <vector>

#include "softkm/core.hpp"
#include "softkm/iterate.hpp"
#include "softkm/rng.hpp"

namespace softkm {

// Parameters of the sliding-window clusterer. All derived sizes are computed
// here so callers and tests agree on them.
struct WindowConfig {
    std::size_t window = 0;  // L, in points
    std::size_t k = 1;
    double epsilon = 1.0 / 3.0;
    std::size_t sharp_runs = 0;  // 0 = ceil(log2 level_capacity())
    // k-means++ repetitions per query, scored on the live summary. With 1 the
    // query is a single k-means++ pass driven directly by the caller's Rng.
    std::size_t query_runs = 1;
    std::uint64_t seed = 0;

    void validate() const;

    // t = round(1/epsilon) - 1, at least 1.
    std::size_t levels() const;
    // B = 3 k ceil(log2 k), at least k.
    std::size_t block_size() const;
    // S = ceil(L^{1-2eps} B^{2eps}), at least 1: raw span of one summary block
    // and the distance between checkpoints.
    std::size_t shift() const;
    // Points one summary block can hold (size of a k-means# summary).
    std::size_t block_points() const;
    // Capacity of each in-progress level that accumulates the current span.
    std::size_t level_capacity() const;
    // Bound on points held by live summary blocks.
    std::size_t summary_capacity() const;
    // Bound on all live stored points.
    std::size_t memory_bound() const;
    // Windows shorter than one block are kept verbatim.
    bool exact_mode() const { return window < block_size(); }
    std::size_t effective_runs() const;
};

// Summary of the raw stream positions [first, last].
struct SummaryBlock {
    Dataset points;
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    std::size_t level = 0;

    std::uint64_t span() const { return last - first + 1; }
};

// Sliding-window k-means over the most recent L points. Raw points feed a
// small cash-register hierarchy that summarizes the current span; each
// closed span becomes a SummaryBlock. Span boundaries are placed so that
// whenever the number of ingested points is a multiple of S the live blocks
// plus the in-progress levels cover exactly the last L points.
class SlidingWindowStream {
public:
    SlidingWindowStream(WindowConfig config, std::size_t dim);

    void insert(PointView x);

    // k centers by weighted k-means++ (best of query_runs) over snapshot().
    CenterSet query(Rng& rng, bool refine = false, const StopRule& stop = {}) const;

    // Live weighted points: blocks oldest first, then the in-progress levels
    // from the top down to the raw buffer. Between checkpoints the oldest
    // block is down-weighted by the fraction of its span still in the window.
    Dataset snapshot() const;

    bool at_checkpoint() const { return ingested_ % shift_ == 0; }
    std::uint64_t ingested() const { return ingested_; }
    std::uint64_t window_start() const;

    // Weight of blocks lying fully inside the window plus in-progress data.
    double covered_weight() const;
    std::size_t live_points() const;

    const WindowConfig& config() const { return config_; }
    const std::deque<SummaryBlock>& blocks() const { return blocks_; }
    const std::vector<Dataset>& in_progress() const { return levels_; }
    std::size_t dim() const { return dim_; }

private:
    void push(std::size_t level, PointView x, double weight);
    void close_span();
    void expire();

    WindowConfig config_;
    std::size_t dim_;
    std::size_t shift_;
    std::size_t capacity_;
    std::size_t runs_;
    std::vector<Dataset> levels_;
    std::deque<SummaryBlock> blocks_;
    std::deque<Point> ring_;  // exact mode only
    Rng rng_;
    std::uint64_t ingested_ = 0;
    std::uint64_t span_start_ = 0;
};

}  // namespace softkm
