#include "softkm/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace softkm::oracle {

namespace {

struct Search {
    const Dataset& data;
    std::size_t k;
    std::vector<std::size_t> labels;
    std::vector<double> sums;  // k * dim
    std::vector<double> mass;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_labels;

    double leaf_cost() const {
        const std::size_t dim = data.dim();
        double cost = 0.0;
        for (std::size_t p = 0; p < data.size(); ++p) {
            const std::size_t c = labels[p];
            auto x = data.point(p);
            double d = 0.0;
            for (std::size_t j = 0; j < dim; ++j) {
                const double diff = x[j] - sums[c * dim + j] / mass[c];
                d += diff * diff;
            }
            cost += data.weight(p) * d;
        }
        return cost;
    }

    // Restricted growth strings: point i may join any used part or open the next one.
    void recurse(std::size_t i, std::size_t used) {
        const std::size_t dim = data.dim();
        if (i == data.size()) {
            const double c = leaf_cost();
            if (c < best_cost) {
                best_cost = c;
                best_labels = labels;
            }
            return;
        }
        const std::size_t limit = used < k ? used + 1 : k;
        auto x = data.point(i);
        const double w = data.weight(i);
        for (std::size_t part = 0; part < limit; ++part) {
            labels[i] = part;
            mass[part] += w;
            for (std::size_t j = 0; j < dim; ++j) sums[part * dim + j] += w * x[j];
            recurse(i + 1, part == used ? used + 1 : used);
            mass[part] -= w;
            for (std::size_t j = 0; j < dim; ++j) sums[part * dim + j] -= w * x[j];
        }
    }
};

}  // namespace

BruteForceResult brute_force_kmeans(const Dataset& data, std::size_t k) {
    if (data.empty()) throw EmptyDataset("brute_force_kmeans");
    if (k == 0) throw Error("brute_force_kmeans: k must be at least 1");
    const double assignments = std::pow(static_cast<double>(k), static_cast<double>(data.size()));
    if (assignments > kMaxAssignments) {
        throw Error("brute_force_kmeans: instance too large (k^n = " + std::to_string(assignments) + ")");
    }
    const std::size_t dim = data.dim();
    Search s{data, k, std::vector<std::size_t>(data.size(), 0), std::vector<double>(k * dim, 0.0),
             std::vector<double>(k, 0.0), std::numeric_limits<double>::infinity(), {}};
    s.recurse(0, 0);

    // Rebuild centroids from scratch for the winning partition.
    std::size_t parts = 0;
    for (std::size_t l : s.best_labels) parts = std::max(parts, l + 1);
    std::vector<double> sums(parts * dim, 0.0), mass(parts, 0.0);
    for (std::size_t p = 0; p < data.size(); ++p) {
        const std::size_t c = s.best_labels[p];
        mass[c] += data.weight(p);
        for (std::size_t j = 0; j < dim; ++j) sums[c * dim + j] += data.weight(p) * data.point(p)[j];
    }
    BruteForceResult out{s.best_labels, CenterSet(dim), 0.0};
    Point c(dim);
    for (std::size_t i = 0; i < parts; ++i) {
        for (std::size_t j = 0; j < dim; ++j) c[j] = sums[i * dim + j] / mass[i];
        out.centers.add(c);
    }
    out.cost = hard_cost(data, out.centers);
    return out;
}

bool power_mean_check(std::span<const double> a, double p) {
    if (a.empty()) return true;
    double sum = 0.0;
    double lhs = 0.0;
    for (double v : a) {
        sum += v;
        lhs += std::pow(v, p);
    }
    const double rhs = std::pow(static_cast<double>(a.size()), 1.0 - p) * std::pow(sum, p);
    return lhs >= rhs * (1.0 - 1e-12);
}

SandwichResult sandwich_check(const Dataset& data, const CenterSet& centers, const SoftParams& params,
                              double rel_tol) {
    SandwichResult r;
    r.hard = hard_cost(data, centers);
    r.soft = soft_cost(data, centers, params);
    r.bound = approx_factor(centers.size(), params);
    r.lower_ok = r.hard <= r.soft + rel_tol * std::max(r.hard, r.soft);
    r.upper_ok = r.soft <= r.bound * r.hard * (1.0 + rel_tol);
    if (r.hard == 0.0) {
        r.ratio = r.soft == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
    } else {
        r.ratio = r.soft / r.hard;
    }
    return r;
}

}  // namespace softkm::oracle
