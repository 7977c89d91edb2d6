#include "softkm/iterate.hpp"

#include <algorithm>
#include <cmath>

#include "softkm/seeding.hpp"

namespace softkm {

using Clock = std::chrono::steady_clock;

void StopRule::validate() const {
    if (max_iters == 0) throw Error("StopRule: max_iters must be at least 1");
    if (!(rel_tol >= 0.0) || !(move_tol >= 0.0)) throw Error("StopRule: tolerances must be non-negative");
}

double max_displacement(const CenterSet& a, const CenterSet& b) {
    if (a.size() != b.size()) throw Error("max_displacement: center counts differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::sqrt(squared_distance(a.center(i), b.center(i))));
    }
    return worst;
}

CenterSet lloyd_step(const Dataset& data, const CenterSet& centers) {
    if (data.empty()) throw EmptyDataset("lloyd_step");
    require_same_dim(data.dim(), centers.dim());
    const std::size_t k = centers.size();
    const std::size_t dim = data.dim();
    std::vector<double> sums(k * dim, 0.0);
    std::vector<double> mass(k, 0.0);
    for (std::size_t p = 0; p < data.size(); ++p) {
        auto x = data.point(p);
        const std::size_t c = nearest_center(x, centers);
        const double w = data.weight(p);
        mass[c] += w;
        for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += w * x[j];
    }
    CenterSet out = centers;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(mass[i] > 0.0)) continue;
        auto c = out.center_mut(i);
        for (std::size_t j = 0; j < dim; ++j) c[j] = sums[i * dim + j] / mass[i];
    }
    return out;
}

namespace {

double relative_change(double before, double after) {
    const double scale = std::max(std::abs(before), std::abs(after));
    if (scale == 0.0) return 0.0;
    return std::abs(before - after) / scale;
}

}  // namespace

ClusterResult lloyd_run(const Dataset& data, const CenterSet& init, const StopRule& stop) {
    stop.validate();
    if (data.empty()) throw EmptyDataset("lloyd_run");
    require_same_dim(data.dim(), init.dim());
    const auto start = Clock::now();

    ClusterResult res{init, {}};
    auto& rep = res.report;
    double cost = hard_cost(data, init);
    rep.initial_potential = cost;
    rep.potentials.push_back(cost);

    for (std::size_t it = 1; it <= stop.max_iters; ++it) {
        rep.iterations = it;
        CenterSet next = lloyd_step(data, res.centers);
        const double next_cost = hard_cost(data, next);
        if (next_cost > cost) {
            rep.moves.push_back(0.0);
            rep.potentials.push_back(cost);
            rep.converged = true;
            break;
        }
        const double move = max_displacement(res.centers, next);
        const double rel = relative_change(cost, next_cost);
        res.centers = std::move(next);
        cost = next_cost;
        rep.moves.push_back(move);
        rep.potentials.push_back(cost);
        if (move <= stop.move_tol || rel <= stop.rel_tol) {
            rep.converged = true;
            break;
        }
    }
    rep.final_potential = cost;
    rep.wall_time = Clock::now() - start;
    return res;
}

CenterSet em_step(const Dataset& data, const CenterSet& centers, const SoftParams& params, double* potential) {
    if (data.empty()) throw EmptyDataset("em_step");
    require_same_dim(data.dim(), centers.dim());
    const std::size_t k = centers.size();
    const std::size_t dim = data.dim();
    std::vector<double> sums(k * dim, 0.0);
    std::vector<double> mass(k, 0.0);
    std::vector<double> d2(k), u(k);
    double phi = 0.0;
    for (std::size_t p = 0; p < data.size(); ++p) {
        auto x = data.point(p);
        for (std::size_t i = 0; i < k; ++i) d2[i] = squared_distance(x, centers.center(i));
        memberships_from_sq(d2, params, u);
        const double w = data.weight(p);
        double inner = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            inner += u[i] * d2[i];
            const double wu = w * u[i];
            if (wu == 0.0) continue;
            mass[i] += wu;
            double* acc = sums.data() + i * dim;
            for (std::size_t j = 0; j < dim; ++j) acc[j] += wu * x[j];
        }
        phi += w * inner;
    }
    if (potential) *potential = phi;
    CenterSet out = centers;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(mass[i] > 0.0)) continue;
        auto c = out.center_mut(i);
        for (std::size_t j = 0; j < dim; ++j) c[j] = sums[i * dim + j] / mass[i];
    }
    return out;
}

ClusterResult em_run(const Dataset& data, const CenterSet& init, const SoftParams& params, const StopRule& stop) {
    stop.validate();
    if (data.empty()) throw EmptyDataset("em_run");
    require_same_dim(data.dim(), init.dim());
    const auto start = Clock::now();

    ClusterResult res{init, {}};
    auto& rep = res.report;
    double phi_prev = 0.0;
    for (std::size_t it = 1; it <= stop.max_iters; ++it) {
        rep.iterations = it;
        double phi = 0.0;
        CenterSet next = em_step(data, res.centers, params, &phi);
        // phi belongs to the centers before this step.
        rep.potentials.push_back(phi);
        if (it == 1) rep.initial_potential = phi;
        const double move = max_displacement(res.centers, next);
        rep.moves.push_back(move);
        res.centers = std::move(next);
        const bool stalled = it > 1 && relative_change(phi_prev, phi) <= stop.rel_tol;
        if (move <= stop.move_tol || stalled) {
            rep.converged = true;
            break;
        }
        phi_prev = phi;
    }
    rep.final_potential = soft_cost(data, res.centers, params);
    rep.potentials.push_back(rep.final_potential);
    rep.wall_time = Clock::now() - start;
    return res;
}

ClusterResult em_random(const Dataset& data, std::size_t k, const SoftParams& params, const StopRule& stop,
                        Rng& rng) {
    const auto start = Clock::now();
    CenterSet init = uniform_seed(data, k, rng);
    const std::chrono::duration<double> seeding = Clock::now() - start;
    ClusterResult res = em_run(data, init, params, stop);
    res.report.seeding_time = seeding;
    res.report.wall_time += seeding;
    return res;
}

ClusterResult em_plus_plus(const Dataset& data, std::size_t k, const SoftParams& params, const StopRule& stop,
                           Rng& rng) {
    const auto start = Clock::now();
    SeedResult seed = kmeanspp_seed(data, k, rng);
    const std::chrono::duration<double> seeding = Clock::now() - start;
    ClusterResult res = em_run(data, seed.centers, params, stop);
    res.report.seeding_time = seeding;
    res.report.wall_time += seeding;
    return res;
}

}  // namespace softkm
