#include "softkm/seeding.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace softkm {

namespace {

// Inverse-transform draw over `mass`. Only indices with positive mass can be
// returned; rounding at the top end falls back to the last positive entry.
std::size_t draw_index(std::span<const double> mass, double total, Rng& rng) {
    const double target = rng.uniform() * total;
    double cum = 0.0;
    std::size_t last_positive = mass.size();
    for (std::size_t i = 0; i < mass.size(); ++i) {
        if (!(mass[i] > 0.0)) continue;
        last_positive = i;
        cum += mass[i];
        if (cum > target) return i;
    }
    return last_positive;
}

void update_min_dist(const Dataset& data, PointView center, std::vector<double>& min_dist) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double d = squared_distance(data.point(i), center);
        if (d < min_dist[i]) min_dist[i] = d;
    }
}

void check_seed_args(const Dataset& data, std::size_t k, const char* where) {
    if (data.empty()) throw EmptyDataset(where);
    if (k == 0) throw Error(std::string(where) + ": k must be at least 1");
}

}  // namespace

SeedResult kmeanspp_seed(const Dataset& data, std::size_t k, Rng& rng) {
    check_seed_args(data, k, "kmeanspp_seed");
    const std::size_t n = data.size();
    SeedResult out{CenterSet(data.dim()), false, {}};
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    std::vector<double> mass(data.weights().begin(), data.weights().end());

    auto pick = [&](double total) {
        const std::size_t idx = draw_index(mass, total, rng);
        out.trace.chosen.push_back(idx);
        out.trace.chosen_mass.push_back(mass[idx]);
        out.trace.total_mass.push_back(total);
        out.centers.add(data.point(idx));
        update_min_dist(data, data.point(idx), min_dist);
    };

    pick(std::accumulate(mass.begin(), mass.end(), 0.0));
    while (out.centers.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mass[i] = data.weight(i) * min_dist[i];
            total += mass[i];
        }
        if (!(total > 0.0)) {
            out.degenerate = true;
            const std::size_t have = out.centers.size();
            for (std::size_t j = have; j < k; ++j) {
                auto c = out.centers.center(j % have);
                const Point copy(c.begin(), c.end());
                out.centers.add(copy);
            }
            break;
        }
        pick(total);
    }
    return out;
}

std::size_t sharp_batch(std::size_t k) {
    if (k <= 1) return 1;
    const auto b = static_cast<std::size_t>(std::ceil(3.0 * std::log2(static_cast<double>(k))));
    return b < 1 ? 1 : b;
}

SeedResult kmeans_sharp(const Dataset& data, std::size_t k, Rng& rng) {
    check_seed_args(data, k, "kmeans_sharp");
    const std::size_t n = data.size();
    const std::size_t batch = sharp_batch(k);
    SeedResult out{CenterSet(data.dim()), false, {}};
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    std::vector<double> round_mass(n), mass(n);

    for (std::size_t round = 0; round < k && !out.degenerate; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            round_mass[i] = round == 0 ? data.weight(i) : data.weight(i) * min_dist[i];
        }
        for (std::size_t b = 0; b < batch; ++b) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mass[i] = min_dist[i] > 0.0 ? round_mass[i] : 0.0;
                total += mass[i];
            }
            if (!(total > 0.0)) {
                out.degenerate = true;
                break;
            }
            const std::size_t idx = draw_index(mass, total, rng);
            out.trace.chosen.push_back(idx);
            out.trace.chosen_mass.push_back(mass[idx]);
            out.trace.total_mass.push_back(total);
            out.centers.add(data.point(idx));
            update_min_dist(data, data.point(idx), min_dist);
        }
    }
    return out;
}

CenterSet uniform_seed(const Dataset& data, std::size_t k, Rng& rng) {
    check_seed_args(data, k, "uniform_seed");
    const std::size_t n = data.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const std::size_t take = k < n ? k : n;
    for (std::size_t i = 0; i < take; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    CenterSet out(data.dim());
    for (std::size_t i = 0; i < k; ++i) out.add(data.point(idx[i % take]));
    return out;
}

BestOf best_of(std::size_t runs, const SeedProcedure& procedure, const Dataset& data, Rng& rng) {
    if (runs == 0) throw Error("best_of: runs must be at least 1");
    const std::uint64_t base = rng.next_u64();
    BestOf result{SeedResult{CenterSet(data.dim()), false, {}}, 0.0, 0, 0};
    for (std::size_t r = 0; r < runs; ++r) {
        Rng sub(Rng::mix(base, r));
        SeedResult candidate = procedure(data, sub);
        const double cost = hard_cost(data, candidate.centers);
        ++result.runs;
        if (r == 0 || cost < result.cost) {
            result.best = std::move(candidate);
            result.cost = cost;
            result.best_run = r;
        }
    }
    return result;
}

}  // namespace softkm
