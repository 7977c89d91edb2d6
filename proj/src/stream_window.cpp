#include "softkm/stream_window.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "softkm/seeding.hpp"
#include "softkm/stream_cash.hpp"

namespace softkm {

void WindowConfig::validate() const {
    if (window == 0) throw Error("WindowConfig: window length must be at least 1");
    if (k == 0) throw Error("WindowConfig: k must be at least 1");
    if (query_runs == 0) throw Error("WindowConfig: query_runs must be at least 1");
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw Error("WindowConfig: epsilon must lie in (0, 1/2), got " + std::to_string(epsilon));
    }
}

std::size_t WindowConfig::levels() const {
    const auto t = static_cast<long long>(std::llround(1.0 / epsilon)) - 1;
    return t < 1 ? 1 : static_cast<std::size_t>(t);
}

std::size_t WindowConfig::block_size() const {
    const auto lg = k <= 1 ? 0.0 : std::ceil(std::log2(static_cast<double>(k)));
    const auto b = static_cast<std::size_t>(3.0 * static_cast<double>(k) * lg);
    return std::max(b, k);
}

std::size_t WindowConfig::shift() const {
    const double l = static_cast<double>(window);
    const double b = static_cast<double>(block_size());
    const double s = std::ceil(std::pow(l, 1.0 - 2.0 * epsilon) * std::pow(b, 2.0 * epsilon) - 1e-9);
    return std::max<std::size_t>(1, static_cast<std::size_t>(s));
}

std::size_t WindowConfig::block_points() const { return k * sharp_batch(k); }

std::size_t WindowConfig::level_capacity() const {
    const double t = static_cast<double>(levels());
    const double s = static_cast<double>(shift());
    const double b = static_cast<double>(block_points());
    const auto c = static_cast<std::size_t>(std::ceil(std::pow(s, 1.0 / t) * std::pow(b, 1.0 - 1.0 / t) - 1e-9));
    return std::max(c, block_points() + 1);
}

std::size_t WindowConfig::summary_capacity() const {
    const std::size_t s = shift();
    return ((window + s - 1) / s + 1) * block_points();
}

std::size_t WindowConfig::memory_bound() const {
    if (exact_mode()) return window;
    return summary_capacity() + levels() * level_capacity();
}

std::size_t WindowConfig::effective_runs() const {
    if (sharp_runs > 0) return sharp_runs;
    const auto r = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(level_capacity()))));
    return std::max<std::size_t>(r, 1);
}

SlidingWindowStream::SlidingWindowStream(WindowConfig config, std::size_t dim)
    : config_(config), dim_(dim), shift_(0), capacity_(0), runs_(0), rng_(config.seed) {
    config_.validate();
    if (dim == 0) throw Error("SlidingWindowStream: dimension must be at least 1");
    shift_ = config_.shift();
    capacity_ = config_.level_capacity();
    runs_ = config_.effective_runs();
    for (std::size_t l = 0; l < config_.levels(); ++l) levels_.emplace_back(dim);
}

std::uint64_t SlidingWindowStream::window_start() const {
    return ingested_ > config_.window ? ingested_ - config_.window : 0;
}

void SlidingWindowStream::insert(PointView x) {
    require_same_dim(dim_, x.size());
    for (double c : x) {
        if (!std::isfinite(c)) throw Error("point coordinates must be finite");
    }
    ++ingested_;
    if (config_.exact_mode()) {
        ring_.emplace_back(x.begin(), x.end());
        if (ring_.size() > config_.window) ring_.pop_front();
        return;
    }
    push(0, x, 1.0);
    // Spans end where ingested + L is a multiple of S, so the window start
    // lands on a span boundary at every checkpoint.
    if ((ingested_ + config_.window) % shift_ == 0) close_span();
    expire();
}

void SlidingWindowStream::push(std::size_t level, PointView x, double weight) {
    levels_[level].add(x, weight);
    if (levels_[level].size() < capacity_) return;
    Dataset summary = compress_level(levels_[level], config_.k, runs_, rng_);
    levels_[level].clear();
    const bool top = level + 1 == levels_.size();
    for (std::size_t i = 0; i < summary.size(); ++i) {
        if (top) {
            levels_[level].add(summary.point(i), summary.weight(i));
        } else {
            push(level + 1, summary.point(i), summary.weight(i));
        }
    }
}

void SlidingWindowStream::close_span() {
    Dataset gathered(dim_);
    for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
        for (std::size_t i = 0; i < it->size(); ++i) gathered.add(it->point(i), it->weight(i));
        it->clear();
    }
    if (gathered.empty()) return;
    SummaryBlock block{compress_level(gathered, config_.k, runs_, rng_), span_start_, ingested_ - 1,
                       config_.levels()};
    blocks_.push_back(std::move(block));
    span_start_ = ingested_;
}

void SlidingWindowStream::expire() {
    const std::uint64_t start = window_start();
    while (!blocks_.empty() && blocks_.front().last < start) blocks_.pop_front();
}

Dataset SlidingWindowStream::snapshot() const {
    Dataset out(dim_);
    if (config_.exact_mode()) {
        for (const auto& p : ring_) out.add(p);
        return out;
    }
    const std::uint64_t start = window_start();
    for (const auto& block : blocks_) {
        double scale = 1.0;
        if (block.first < start) {
            scale = static_cast<double>(block.last + 1 - start) / static_cast<double>(block.span());
        }
        for (std::size_t i = 0; i < block.points.size(); ++i) {
            out.add(block.points.point(i), block.points.weight(i) * scale);
        }
    }
    for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) {
        for (std::size_t i = 0; i < it->size(); ++i) out.add(it->point(i), it->weight(i));
    }
    return out;
}

double SlidingWindowStream::covered_weight() const {
    if (config_.exact_mode()) return static_cast<double>(ring_.size());
    const std::uint64_t start = window_start();
    double w = 0.0;
    for (const auto& block : blocks_) {
        if (block.first >= start) w += block.points.total_weight();
    }
    for (const auto& lvl : levels_) w += lvl.total_weight();
    return w;
}

std::size_t SlidingWindowStream::live_points() const {
    if (config_.exact_mode()) return ring_.size();
    std::size_t n = 0;
    for (const auto& block : blocks_) n += block.points.size();
    for (const auto& lvl : levels_) n += lvl.size();
    return n;
}

CenterSet SlidingWindowStream::query(Rng& rng, bool refine, const StopRule& stop) const {
    if (ingested_ == 0) throw EmptyDataset("SlidingWindowStream::query");
    const Dataset live = snapshot();
    CenterSet centers = seed_summary(live, config_.k, config_.query_runs, rng);
    if (refine) centers = lloyd_run(live, centers, stop).centers;
    return centers;
}

}  // namespace softkm
