#include "softkm/stream_cash.hpp"

#include <cmath>
#include <string>

#include "softkm/seeding.hpp"

namespace softkm {

void StreamConfig::validate() const {
    if (k == 0) throw Error("StreamConfig: k must be at least 1");
    if (levels == 0) throw Error("StreamConfig: levels must be at least 1");
    if (final_runs == 0) throw Error("StreamConfig: final_runs must be at least 1");
    const std::size_t summary = k * sharp_batch(k);
    if (memory <= summary) {
        throw Error("StreamConfig: memory must exceed k*ceil(3 log2 k) = " + std::to_string(summary));
    }
}

std::size_t StreamConfig::effective_runs() const {
    if (sharp_runs > 0) return sharp_runs;
    const auto r = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(memory))));
    return r < 1 ? 1 : r;
}

Dataset compress_level(const Dataset& buffer, std::size_t k, std::size_t runs, Rng& rng) {
    if (buffer.empty()) throw EmptyDataset("compress_level");
    const SeedProcedure sharp = [k](const Dataset& d, Rng& r) { return kmeans_sharp(d, k, r); };
    const BestOf chosen = best_of(runs, sharp, buffer, rng);
    const CenterSet& centers = chosen.best.centers;

    std::vector<double> weight(centers.size(), 0.0);
    for (std::size_t p = 0; p < buffer.size(); ++p) {
        weight[nearest_center(buffer.point(p), centers)] += buffer.weight(p);
    }
    Dataset out(buffer.dim());
    out.reserve(centers.size());
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (weight[i] > 0.0) out.add(centers.center(i), weight[i]);
    }
    return out;
}

CenterSet seed_summary(const Dataset& summary, std::size_t k, std::size_t runs, Rng& rng) {
    if (runs <= 1) return kmeanspp_seed(summary, k, rng).centers;
    const SeedProcedure pp = [k](const Dataset& d, Rng& r) { return kmeanspp_seed(d, k, r); };
    return best_of(runs, pp, summary, rng).best.centers;
}

CashRegisterStream::CashRegisterStream(StreamConfig config, std::size_t dim)
    : config_(config), dim_(dim), runs_(0), rng_(config.seed) {
    config_.validate();
    if (dim == 0) throw Error("CashRegisterStream: dimension must be at least 1");
    runs_ = config_.effective_runs();
    levels_.reserve(config_.levels);
    for (std::size_t l = 0; l < config_.levels; ++l) levels_.push_back(LevelBuffer{l, Dataset(dim), 0.0});
}

void CashRegisterStream::ingest(PointView x) {
    require_same_dim(dim_, x.size());
    push(0, x, 1.0);
    ++ingested_;
}

void CashRegisterStream::push(std::size_t level, PointView x, double weight) {
    auto& buf = levels_[level];
    buf.points.add(x, weight);
    buf.ingested_weight += weight;
    if (buf.points.size() >= config_.memory) compress(level);
}

void CashRegisterStream::compress(std::size_t level) {
    Dataset summary = compress_level(levels_[level].points, config_.k, runs_, rng_);
    ++compressions_;
    levels_[level].points.clear();
    const bool top = level + 1 == levels_.size();
    // The top level has nowhere to send its summary; it keeps it.
    const std::size_t target = top ? level : level + 1;
    for (std::size_t i = 0; i < summary.size(); ++i) {
        if (top) {
            levels_[level].points.add(summary.point(i), summary.weight(i));
        } else {
            push(target, summary.point(i), summary.weight(i));
        }
    }
}

Dataset CashRegisterStream::snapshot() const {
    Dataset out(dim_);
    out.reserve(live_points());
    for (const auto& lvl : levels_) {
        for (std::size_t i = 0; i < lvl.points.size(); ++i) out.add(lvl.points.point(i), lvl.points.weight(i));
    }
    return out;
}

std::size_t CashRegisterStream::live_points() const {
    std::size_t n = 0;
    for (const auto& lvl : levels_) n += lvl.points.size();
    return n;
}

double CashRegisterStream::live_weight() const {
    double w = 0.0;
    for (const auto& lvl : levels_) w += lvl.points.total_weight();
    return w;
}

CenterSet CashRegisterStream::finalize(Rng& rng, bool refine, const StopRule& stop) const {
    if (ingested_ == 0) throw EmptyDataset("CashRegisterStream::finalize");
    const Dataset live = snapshot();
    CenterSet centers = seed_summary(live, config_.k, config_.final_runs, rng);
    if (refine) centers = lloyd_run(live, centers, stop).centers;
    return centers;
}

}  // namespace softkm
