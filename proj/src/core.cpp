#include "softkm/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace softkm {

DimensionMismatch::DimensionMismatch(std::size_t expected, std::size_t actual)
    : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
            std::to_string(actual)) {}

EmptyDataset::EmptyDataset(const std::string& where) : Error(where + ": empty dataset") {}

void require_same_dim(std::size_t expected, std::size_t actual) {
    if (expected != actual) throw DimensionMismatch(expected, actual);
}

Dataset::Dataset(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw Error("dataset dimension must be at least 1");
}

Dataset Dataset::from_rows(const std::vector<Point>& rows) {
    if (rows.empty()) throw EmptyDataset("Dataset::from_rows");
    Dataset ds(rows.front().size());
    ds.reserve(rows.size());
    for (const auto& r : rows) ds.add(r);
    return ds;
}

void Dataset::add(PointView coords, double weight) {
    require_same_dim(dim_, coords.size());
    if (!(weight > 0.0) || !std::isfinite(weight)) throw Error("point weight must be positive and finite");
    for (double c : coords) {
        if (!std::isfinite(c)) throw Error("point coordinates must be finite");
    }
    coords_.insert(coords_.end(), coords.begin(), coords.end());
    weights_.push_back(weight);
}

void Dataset::reserve(std::size_t n) {
    coords_.reserve(n * dim_);
    weights_.reserve(n);
}

void Dataset::clear() {
    coords_.clear();
    weights_.clear();
}

WeightedPoint Dataset::at(std::size_t i) const {
    auto p = point(i);
    return {Point(p.begin(), p.end()), weights_[i]};
}

double Dataset::total_weight() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
}

void Dataset::set_weight(std::size_t i, double w) {
    if (!(w > 0.0) || !std::isfinite(w)) throw Error("point weight must be positive and finite");
    weights_.at(i) = w;
}

CenterSet::CenterSet(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw Error("center dimension must be at least 1");
}

CenterSet CenterSet::from_rows(const std::vector<Point>& rows) {
    if (rows.empty()) throw Error("CenterSet::from_rows: no centers");
    CenterSet cs(rows.front().size());
    for (const auto& r : rows) cs.add(r);
    return cs;
}

void CenterSet::add(PointView c) {
    require_same_dim(dim_, c.size());
    coords_.insert(coords_.end(), c.begin(), c.end());
}

std::vector<Point> CenterSet::rows() const {
    std::vector<Point> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        auto c = center(i);
        out.emplace_back(c.begin(), c.end());
    }
    return out;
}

SoftParams::SoftParams(double m) : m_(m), g_(1.0 / m - 1.0) {
    if (!(m > 0.0 && m < 1.0)) throw Error("fuzziness m must lie in (0, 1), got " + std::to_string(m));
}

double squared_distance(PointView a, PointView b) {
    require_same_dim(a.size(), b.size());
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        s += diff * diff;
    }
    return s;
}

namespace {

void check_inputs(const Dataset& data, const CenterSet& centers, const char* where) {
    if (data.empty()) throw EmptyDataset(where);
    if (centers.empty()) throw Error(std::string(where) + ": no centers");
    require_same_dim(data.dim(), centers.dim());
}

void fill_sq_distances(PointView x, const CenterSet& centers, std::span<double> out) {
    for (std::size_t i = 0; i < centers.size(); ++i) out[i] = squared_distance(x, centers.center(i));
}

}  // namespace

std::size_t nearest_center(PointView x, const CenterSet& centers, double* dist2) {
    require_same_dim(centers.dim(), x.size());
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i) {
        const double d = squared_distance(x, centers.center(i));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    if (dist2) *dist2 = best_d;
    return best;
}

double hard_cost(const Dataset& data, const CenterSet& centers) {
    check_inputs(data, centers, "hard_cost");
    double total = 0.0;
    for (std::size_t p = 0; p < data.size(); ++p) {
        double d2 = 0.0;
        nearest_center(data.point(p), centers, &d2);
        total += data.weight(p) * d2;
    }
    return total;
}

void memberships_from_sq(std::span<const double> dist2, const SoftParams& params, std::span<double> out) {
    const std::size_t k = dist2.size();
    const double dmin = *std::min_element(dist2.begin(), dist2.end());
    if (dmin == 0.0) {
        std::size_t hits = 0;
        for (double d : dist2) hits += (d == 0.0);
        const double share = 1.0 / static_cast<double>(hits);
        for (std::size_t i = 0; i < k; ++i) out[i] = dist2[i] == 0.0 ? share : 0.0;
        return;
    }
    // u_i = (dmin/D_i)^{1/m} / sum_j (dmin/D_j)^{1/m}, D = squared distance.
    const double expo = params.inverse_m();
    double sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        out[i] = std::pow(dmin / dist2[i], expo);
        sum += out[i];
    }
    for (std::size_t i = 0; i < k; ++i) out[i] /= sum;
}

MembershipRow memberships(PointView x, const CenterSet& centers, const SoftParams& params) {
    if (centers.empty()) throw Error("memberships: no centers");
    require_same_dim(centers.dim(), x.size());
    std::vector<double> d2(centers.size());
    fill_sq_distances(x, centers, d2);
    MembershipRow row(centers.size());
    memberships_from_sq(d2, params, row);
    return row;
}

CenterSet soft_centroids(const Dataset& data, const CenterSet& centers, const SoftParams& params) {
    check_inputs(data, centers, "soft_centroids");
    const std::size_t k = centers.size();
    const std::size_t dim = data.dim();
    std::vector<double> sums(k * dim, 0.0);
    std::vector<double> mass(k, 0.0);
    std::vector<double> d2(k), u(k);
    for (std::size_t p = 0; p < data.size(); ++p) {
        auto x = data.point(p);
        fill_sq_distances(x, centers, d2);
        memberships_from_sq(d2, params, u);
        const double w = data.weight(p);
        for (std::size_t i = 0; i < k; ++i) {
            const double wu = w * u[i];
            if (wu == 0.0) continue;
            mass[i] += wu;
            double* acc = sums.data() + i * dim;
            for (std::size_t j = 0; j < dim; ++j) acc[j] += wu * x[j];
        }
    }
    CenterSet out = centers;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(mass[i] > 0.0)) continue;
        auto c = out.center_mut(i);
        for (std::size_t j = 0; j < dim; ++j) c[j] = sums[i * dim + j] / mass[i];
    }
    return out;
}

double soft_cost(const Dataset& data, const CenterSet& centers, const SoftParams& params) {
    check_inputs(data, centers, "soft_cost");
    const std::size_t k = centers.size();
    std::vector<double> d2(k), u(k);
    double total = 0.0;
    for (std::size_t p = 0; p < data.size(); ++p) {
        fill_sq_distances(data.point(p), centers, d2);
        memberships_from_sq(d2, params, u);
        double inner = 0.0;
        for (std::size_t i = 0; i < k; ++i) inner += u[i] * d2[i];
        total += data.weight(p) * inner;
    }
    return total;
}

double soft_cost_closed(const Dataset& data, const CenterSet& centers, const SoftParams& params) {
    check_inputs(data, centers, "soft_cost_closed");
    const std::size_t k = centers.size();
    const double g = params.g();
    const double inv_m = params.inverse_m();
    std::vector<double> d2(k);
    double total = 0.0;
    for (std::size_t p = 0; p < data.size(); ++p) {
        fill_sq_distances(data.point(p), centers, d2);
        const double dmin = *std::min_element(d2.begin(), d2.end());
        if (dmin == 0.0) continue;
        // d_i^{-2g} = D_i^{-g}; factoring dmin out leaves dmin^{1/m - g} = dmin.
        double num = 0.0;
        double den = 0.0;
        for (double d : d2) {
            const double ratio = dmin / d;
            num += std::pow(ratio, g);
            den += std::pow(ratio, inv_m);
        }
        total += data.weight(p) * dmin * (num / den);
    }
    return total;
}

double approx_factor(std::size_t k, const SoftParams& params) {
    if (k == 0) throw Error("approx_factor: k must be at least 1");
    return std::pow(static_cast<double>(k), params.m() / (1.0 - params.m()));
}

}  // namespace softkm
