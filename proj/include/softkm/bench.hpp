#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "softkm/core.hpp"
#include "softkm/iterate.hpp"

namespace softkm::bench {

class DatasetFormatError : public Error {
public:
    using Error::Error;
};

// Pulls one point per row from a text stream. Cells are separated by commas,
// or by whitespace when a row has no comma. A non-numeric first row is taken
// as a header and skipped; any later non-numeric cell is an error naming the
// row and column.
class PointReader {
public:
    PointReader(std::istream& in, std::string source_name);

    std::optional<Point> next();
    std::size_t row() const { return row_; }

private:
    std::istream& in_;
    std::string name_;
    std::size_t row_ = 0;
    std::size_t dim_ = 0;
    bool first_ = true;
};

// Reads one point per row. Cells are separated by commas, or by whitespace
// when a row has no comma. A non-numeric first row is taken as a header.
Dataset parse_points(std::istream& in, const std::string& source_name = "<stream>");
Dataset load_csv(const std::string& path);

struct NamedShape {
    std::size_t n;
    std::size_t d;
};
inline constexpr NamedShape kSpamShape{4601, 58};
inline constexpr NamedShape kCloudShape{1024, 10};

// Checks a loaded dataset against the published shape of a named dataset.
void check_shape(const Dataset& data, const std::string& name, NamedShape shape);

// Sources: spam[:PATH], cloud[:PATH], csv:PATH, synth:N,D,C,SEP. Named
// datasets without a path are looked up in $SOFTKM_DATA_DIR (default
// "data") as spambase.data and cloud.data. Synthetic sources use `seed`.
Dataset load_dataset(const std::string& source, std::uint64_t seed = 0);

struct Mixture {
    Dataset data;
    std::vector<Point> means;
    std::vector<std::size_t> labels;
};

// Isotropic Gaussian mixture (unit variance per coordinate) with equal-size
// components whose means are pairwise at least `separation` apart. Points
// are shuffled. Deterministic per seed.
Mixture synth_mixture_labeled(std::size_t n, std::size_t d, std::size_t components, double separation,
                              std::uint64_t seed);
Dataset synth_mixture(std::size_t n, std::size_t d, std::size_t components, double separation,
                      std::uint64_t seed);

enum class Algorithm { em, empp };
std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct ExperimentSpec {
    std::string source;
    std::vector<std::size_t> ks{10, 25, 50};
    std::vector<double> ms{0.1, 0.25, 0.5};
    std::size_t trials = 20;
    std::uint64_t seed = 0;
    std::vector<Algorithm> algorithms{Algorithm::em, Algorithm::empp};
    StopRule stop{};
    std::size_t threads = 1;

    void validate() const;
};

struct AlgorithmStats {
    std::vector<double> phi;      // final soft potential per trial
    std::vector<double> seconds;  // seed + iterate wall time per trial
    double avg_phi = 0.0;
    double min_phi = 0.0;
    double avg_time = 0.0;

    bool empty() const { return phi.empty(); }
};

struct CellStats {
    double m = 0.0;
    std::size_t k = 0;
    AlgorithmStats em;
    AlgorithmStats empp;
};

struct TrialStats {
    std::vector<CellStats> cells;
};

// Generator seed for one trial of one (m, k) cell and algorithm.
std::uint64_t trial_seed(std::uint64_t master, std::size_t cell, std::size_t trial, Algorithm algo);

TrialStats run_experiment(const ExperimentSpec& spec, const Dataset& data);
TrialStats run_experiment(const ExperimentSpec& spec);

// 100 * (1 - empp / em); empty when em is zero.
std::optional<double> improvement(double em, double empp);

enum class TableFormat { markdown, csv };
// Empty string selects markdown.
TableFormat parse_format(const std::string& name);

std::string emit_table(const TrialStats& stats, TableFormat format);

}  // namespace softkm::bench
