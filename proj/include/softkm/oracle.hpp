#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "softkm/core.hpp"

namespace softkm::oracle {

struct BruteForceResult {
    std::vector<std::size_t> assignment;  // part label per point
    CenterSet centers;                    // centroid of every non-empty part
    double cost = 0.0;
};

// Largest k^n the exhaustive search accepts.
inline constexpr double kMaxAssignments = 1e7;

// Exact k-means optimum by enumerating every partition of the points into at
// most k labelled-by-first-appearance parts. Throws when k^n exceeds
// kMaxAssignments.
BruteForceResult brute_force_kmeans(const Dataset& data, std::size_t k);

// sum_i a_i^p >= k^{1-p} (sum_i a_i)^p with 1e-12 relative slack, k = |a|.
bool power_mean_check(std::span<const double> a, double p);

struct SandwichResult {
    bool lower_ok = false;  // hard <= soft
    bool upper_ok = false;  // soft <= k^{m/(1-m)} hard
    double ratio = 1.0;     // soft / hard
    double hard = 0.0;
    double soft = 0.0;
    double bound = 1.0;     // k^{m/(1-m)}
};

SandwichResult sandwich_check(const Dataset& data, const CenterSet& centers, const SoftParams& params,
                              double rel_tol = 1e-9);

}  // namespace softkm::oracle
