#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace softkm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual);
};

class EmptyDataset : public Error {
public:
    explicit EmptyDataset(const std::string& where);
};

using Point = std::vector<double>;
using PointView = std::span<const double>;

struct WeightedPoint {
    Point point;
    double weight = 1.0;
};

// Row-major store of weighted points sharing one dimension.
class Dataset {
public:
    explicit Dataset(std::size_t dim);

    static Dataset from_rows(const std::vector<Point>& rows);

    void add(PointView coords, double weight = 1.0);
    void add(const WeightedPoint& wp) { add(wp.point, wp.weight); }
    void reserve(std::size_t n);
    void clear();

    std::size_t size() const { return weights_.size(); }
    bool empty() const { return weights_.empty(); }
    std::size_t dim() const { return dim_; }

    PointView point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const { return weights_; }
    std::span<const double> coords() const { return coords_; }
    WeightedPoint at(std::size_t i) const;
    double total_weight() const;

    // Replaces the weight of point i; used for partial-expiry scaling.
    void set_weight(std::size_t i, double w);

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t dim_;
    std::vector<double> coords_;
    std::vector<double> weights_;
};

class CenterSet {
public:
    explicit CenterSet(std::size_t dim);

    static CenterSet from_rows(const std::vector<Point>& rows);

    void add(PointView c);
    std::size_t size() const { return coords_.size() / dim_; }
    bool empty() const { return coords_.empty(); }
    std::size_t dim() const { return dim_; }

    PointView center(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    std::span<double> center_mut(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
    std::span<const double> coords() const { return coords_; }
    std::vector<Point> rows() const;

    friend bool operator==(const CenterSet&, const CenterSet&) = default;

private:
    std::size_t dim_;
    std::vector<double> coords_;
};

// Fuzziness m in (0,1); the exponent g = 1/m - 1 is always derived from m.
class SoftParams {
public:
    explicit SoftParams(double m);

    double m() const { return m_; }
    double g() const { return g_; }
    // Exponent applied to squared-distance ratios in the membership formula (= 1/m).
    double inverse_m() const { return 1.0 / m_; }

private:
    double m_;
    double g_;
};

using MembershipRow = std::vector<double>;

double squared_distance(PointView a, PointView b);

// Index of the nearest center; ties go to the lowest index.
std::size_t nearest_center(PointView x, const CenterSet& centers, double* dist2 = nullptr);

// Weighted sum over points of the squared distance to the nearest center.
double hard_cost(const Dataset& data, const CenterSet& centers);

// Fuzzy membership of x in each center. A point sitting exactly on one or
// more centers gets its mass split uniformly across those centers.
MembershipRow memberships(PointView x, const CenterSet& centers, const SoftParams& params);

// Same as above from precomputed squared distances; writes into `out`.
void memberships_from_sq(std::span<const double> dist2, const SoftParams& params, std::span<double> out);

// Membership-weighted centroids. A center that receives no mass keeps its
// previous position.
CenterSet soft_centroids(const Dataset& data, const CenterSet& centers, const SoftParams& params);

// Direct double sum of membership times squared distance.
double soft_cost(const Dataset& data, const CenterSet& centers, const SoftParams& params);

// Closed form sum_x [sum_i d_i^{-2g}] / [sum_i d_i^{-2/m}], evaluated as
// ratios against the nearest distance so nothing overflows for small m.
double soft_cost_closed(const Dataset& data, const CenterSet& centers, const SoftParams& params);

// k^{m/(1-m)}: bound on soft/hard potential for any center set of size k.
double approx_factor(std::size_t k, const SoftParams& params);

void require_same_dim(std::size_t expected, std::size_t actual);

}  // namespace softkm
