#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "softkm/core.hpp"
#include "softkm/rng.hpp"

namespace softkm {

// Record of a seeding pass: which data indices were picked and the
// weighted squared-distance mass each one carried when it was drawn.
struct SeedingTrace {
    std::vector<std::size_t> chosen;
    std::vector<double> chosen_mass;  // w(x) * D(x)^2 of the pick; w(x) for the first
    std::vector<double> total_mass;   // sum of w * D^2 before each pick
};

struct SeedResult {
    CenterSet centers;
    // Set when the data ran out of positive-mass candidates before the
    // requested count was reached.
    bool degenerate = false;
    SeedingTrace trace;
};

// k-means++ D^2 seeding with weights: P(x) proportional to w(x) D(x)^2, the
// first pick proportional to w(x). If every point coincides with a chosen
// center before k picks, the remaining slots repeat the chosen centers in
// order and the result is flagged degenerate.
SeedResult kmeanspp_seed(const Dataset& data, std::size_t k, Rng& rng);

// Rounds per draw for k-means#: max(1, ceil(3 log2 k)).
std::size_t sharp_batch(std::size_t k);

// k-means#: k rounds of sharp_batch(k) draws each. Draws within a round
// follow the mass distribution fixed at the start of the round, restricted
// to points not yet covered by a chosen center. Returns at most
// k * sharp_batch(k) distinct centers; if the data has fewer distinct
// points, returns all of them and flags the result degenerate.
SeedResult kmeans_sharp(const Dataset& data, std::size_t k, Rng& rng);

// k distinct data indices drawn uniformly without replacement (baseline
// initialization for plain EM). If n < k the missing centers repeat.
CenterSet uniform_seed(const Dataset& data, std::size_t k, Rng& rng);

using SeedProcedure = std::function<SeedResult(const Dataset&, Rng&)>;

struct BestOf {
    SeedResult best;
    double cost = 0.0;
    std::size_t best_run = 0;
    std::size_t runs = 0;
};

// Runs `procedure` `runs` times on sub-generators Rng(Rng::mix(base, i)),
// base = rng.next_u64(), and keeps the lowest hard cost (first on ties).
BestOf best_of(std::size_t runs, const SeedProcedure& procedure, const Dataset& data, Rng& rng);

}  // namespace softkm
