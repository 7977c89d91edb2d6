#pragma once

#include <chrono>
#include <cstddef>
#include <vector>

#include "softkm/core.hpp"
#include "softkm/rng.hpp"

namespace softkm {

// Stops at the first of: max_iters reached, relative potential change at or
// below rel_tol, or largest center displacement at or below move_tol.
struct StopRule {
    std::size_t max_iters = 300;
    double rel_tol = 1e-6;
    double move_tol = 1e-8;

    void validate() const;
};

struct IterationReport {
    std::size_t iterations = 0;
    double initial_potential = 0.0;
    double final_potential = 0.0;
    bool converged = false;
    std::chrono::duration<double> wall_time{0};
    std::chrono::duration<double> seeding_time{0};
    // potentials[i] is the potential of the centers after i steps.
    std::vector<double> potentials;
    // moves[i] is the largest center displacement during step i + 1.
    std::vector<double> moves;
};

struct ClusterResult {
    CenterSet centers;
    IterationReport report;
};

double max_displacement(const CenterSet& a, const CenterSet& b);

// One Lloyd step: nearest-center assignment then weighted centroids. Empty
// clusters keep their center.
CenterSet lloyd_step(const Dataset& data, const CenterSet& centers);

// Lloyd's algorithm on weighted data. The hard cost is non-increasing along
// the recorded trajectory: a step that would raise it (only possible through
// rounding at a fixed point) is discarded and the run ends converged.
ClusterResult lloyd_run(const Dataset& data, const CenterSet& init, const StopRule& stop = {});

// One EM step: memberships of every point then the soft centroids. If
// `potential` is non-null it receives the soft potential of `centers`.
CenterSet em_step(const Dataset& data, const CenterSet& centers, const SoftParams& params,
                  double* potential = nullptr);

// Soft k-means EM loop; potentials are the soft cost per iteration.
ClusterResult em_run(const Dataset& data, const CenterSet& init, const SoftParams& params,
                     const StopRule& stop = {});

// EM started from uniformly drawn data points.
ClusterResult em_random(const Dataset& data, std::size_t k, const SoftParams& params,
                        const StopRule& stop, Rng& rng);

// EM++: k-means++ seeding followed by EM.
ClusterResult em_plus_plus(const Dataset& data, std::size_t k, const SoftParams& params,
                           const StopRule& stop, Rng& rng);

}  // namespace softkm
