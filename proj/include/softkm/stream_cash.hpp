#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "softkm/core.hpp"
#include "softkm/iterate.hpp"
#include "softkm/rng.hpp"

namespace softkm {

struct StreamConfig {
    std::size_t k = 1;
    std::size_t memory = 0;      // M: points a level holds before it is compressed
    std::size_t levels = 4;      // r: the top level recompresses in place
    std::size_t sharp_runs = 0;  // R: k-means# repetitions per compression; 0 = ceil(log2 M)
    std::size_t final_runs = 1;  // k-means++ repetitions in finalize, scored on the live summary
    std::uint64_t seed = 0;

    void validate() const;
    std::size_t effective_runs() const;
};

struct LevelBuffer {
    std::size_t level = 0;
    Dataset points;
    double ingested_weight = 0.0;  // total weight ever pushed into this level
};

// Summarizes a weighted buffer with the best of `runs` k-means# passes. Every
// buffered point is credited to its nearest summary center (ties to the lower
// index), so the output weights sum to the input weight.
Dataset compress_level(const Dataset& buffer, std::size_t k, std::size_t runs, Rng& rng);

// k centers over a weighted summary: one k-means++ pass on `rng` when runs is
// 1, otherwise the best of `runs` passes by weighted cost on the summary.
CenterSet seed_summary(const Dataset& summary, std::size_t k, std::size_t runs, Rng& rng);

// Multi-level cash-register clusterer. Raw points enter level 0 with weight
// one; a level that reaches M points is compressed and its summary moves up.
class CashRegisterStream {
public:
    CashRegisterStream(StreamConfig config, std::size_t dim);

    void ingest(PointView x);

    // k centers by weighted k-means++ (best of final_runs) over every live point, optionally
    // polished with weighted Lloyd. Does not modify the stream.
    CenterSet finalize(Rng& rng, bool refine = false, const StopRule& stop = {}) const;

    // All live weighted points, level 0 first.
    Dataset snapshot() const;

    const StreamConfig& config() const { return config_; }
    std::size_t dim() const { return dim_; }
    const std::vector<LevelBuffer>& levels() const { return levels_; }
    std::size_t ingested() const { return ingested_; }
    std::size_t live_points() const;
    double live_weight() const;
    std::size_t compressions() const { return compressions_; }

private:
    void push(std::size_t level, PointView x, double weight);
    void compress(std::size_t level);

    StreamConfig config_;
    std::size_t dim_;
    std::size_t runs_;
    std::vector<LevelBuffer> levels_;
    Rng rng_;
    std::size_t ingested_ = 0;
    std::size_t compressions_ = 0;
};

}  // namespace softkm
