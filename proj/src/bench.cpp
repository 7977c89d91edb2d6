#include "softkm/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <thread>

#include "softkm/rng.hpp"

namespace softkm::bench {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    if (line.find(',') != std::string::npos) {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
        if (!line.empty() && line.back() == ',') cells.emplace_back();
    } else {
        std::stringstream ss(line);
        std::string cell;
        while (ss >> cell) cells.push_back(cell);
    }
    return cells;
}

std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (*begin == '+') ++begin;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

PointReader::PointReader(std::istream& in, std::string source_name) : in_(in), name_(std::move(source_name)) {}

std::optional<Point> PointReader::next() {
    std::string line;
    while (std::getline(in_, line)) {
        ++row_;
        if (trim(line).empty()) continue;
        const auto cells = split_cells(line);
        Point values;
        values.reserve(cells.size());
        std::optional<std::size_t> bad_col;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            auto v = parse_number(cells[c]);
            if (!v) {
                bad_col = c;
                break;
            }
            values.push_back(*v);
        }
        if (bad_col) {
            if (first_) {
                first_ = false;
                continue;
            }
            throw DatasetFormatError(name_ + ": row " + std::to_string(row_) + ", column " +
                                     std::to_string(*bad_col + 1) + ": non-numeric value '" + cells[*bad_col] + "'");
        }
        first_ = false;
        if (dim_ == 0) {
            dim_ = values.size();
        } else if (values.size() != dim_) {
            throw DatasetFormatError(name_ + ": row " + std::to_string(row_) + " has " +
                                     std::to_string(values.size()) + " columns, expected " + std::to_string(dim_));
        }
        return values;
    }
    return std::nullopt;
}

Dataset parse_points(std::istream& in, const std::string& source_name) {
    PointReader reader(in, source_name);
    std::optional<Dataset> data;
    while (auto p = reader.next()) {
        if (!data) data.emplace(p->size());
        data->add(*p);
    }
    if (!data) throw EmptyDataset(source_name);
    return std::move(*data);
}

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetFormatError("cannot open '" + path + "'");
    return parse_points(in, path);
}

void check_shape(const Dataset& data, const std::string& name, NamedShape shape) {
    if (data.dim() != shape.d || data.size() != shape.n) {
        throw DatasetFormatError(name + ": expected n=" + std::to_string(shape.n) + ", d=" + std::to_string(shape.d) +
                                 " but found n=" + std::to_string(data.size()) +
                                 ", d=" + std::to_string(data.dim()) + " (expected d=" + std::to_string(shape.d) +
                                 ")");
    }
}

Dataset load_dataset(const std::string& source, std::uint64_t seed) {
    const auto colon = source.find(':');
    const std::string kind = source.substr(0, colon);
    const std::string arg = colon == std::string::npos ? std::string{} : source.substr(colon + 1);

    auto data_dir = [] {
        const char* env = std::getenv("SOFTKM_DATA_DIR");
        return std::string(env && *env ? env : "data");
    };

    if (kind == "spam" || kind == "cloud") {
        const bool spam = kind == "spam";
        const std::string path = arg.empty() ? data_dir() + (spam ? "/spambase.data" : "/cloud.data") : arg;
        Dataset d = load_csv(path);
        check_shape(d, kind, spam ? kSpamShape : kCloudShape);
        return d;
    }
    if (kind == "csv") {
        if (arg.empty()) throw DatasetFormatError("csv source needs a path: csv:PATH");
        return load_csv(arg);
    }
    if (kind == "synth") {
        const auto parts = split_list(arg, ',');
        if (parts.size() != 4) throw DatasetFormatError("synth source must be synth:N,D,C,SEP");
        try {
            return synth_mixture(std::stoul(parts[0]), std::stoul(parts[1]), std::stoul(parts[2]),
                                 std::stod(parts[3]), seed);
        } catch (const std::logic_error&) {
            throw DatasetFormatError("synth source must be synth:N,D,C,SEP, got '" + arg + "'");
        }
    }
    throw DatasetFormatError("unknown dataset source '" + source + "'");
}

Mixture synth_mixture_labeled(std::size_t n, std::size_t d, std::size_t components, double separation,
                              std::uint64_t seed) {
    if (components == 0) throw Error("synth_mixture: components must be at least 1");
    if (d == 0) throw Error("synth_mixture: dimension must be at least 1");
    if (n == 0) throw Error("synth_mixture: n must be at least 1");
    Rng rng(seed);

    // Means by rejection in a cube that grows until they fit.
    std::vector<Point> means;
    const double per_axis = std::ceil(std::pow(static_cast<double>(components), 1.0 / static_cast<double>(d)));
    double side = std::max(1.0, separation * 2.0 * per_axis);
    while (means.size() < components) {
        means.clear();
        bool ok = true;
        for (std::size_t c = 0; c < components && ok; ++c) {
            ok = false;
            for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
                Point cand(d);
                for (auto& v : cand) v = rng.uniform() * side;
                ok = std::all_of(means.begin(), means.end(),
                                 [&](const Point& m) { return squared_distance(m, cand) >= separation * separation; });
                if (ok) means.push_back(std::move(cand));
            }
        }
        if (!ok) side *= 1.5;
    }

    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = i % components;
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(labels[i - 1], labels[j]);
    }

    Mixture out{Dataset(d), std::move(means), std::move(labels)};
    out.data.reserve(n);
    Point x(d);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& mu = out.means[out.labels[i]];
        for (std::size_t j = 0; j < d; ++j) x[j] = mu[j] + rng.normal();
        out.data.add(x);
    }
    return out;
}

Dataset synth_mixture(std::size_t n, std::size_t d, std::size_t components, double separation, std::uint64_t seed) {
    return synth_mixture_labeled(n, d, components, separation, seed).data;
}

std::string to_string(Algorithm a) { return a == Algorithm::em ? "em" : "empp"; }

Algorithm parse_algorithm(const std::string& name) {
    if (name == "em") return Algorithm::em;
    if (name == "empp" || name == "em++") return Algorithm::empp;
    throw Error("unknown algorithm '" + name + "' (expected em or empp)");
}

void ExperimentSpec::validate() const {
    if (trials == 0) throw Error("ExperimentSpec: trials must be at least 1");
    if (ks.empty() || ms.empty()) throw Error("ExperimentSpec: k and m lists must be nonempty");
    if (algorithms.empty()) throw Error("ExperimentSpec: no algorithm selected");
    for (auto k : ks) {
        if (k == 0) throw Error("ExperimentSpec: k must be at least 1");
    }
    for (double m : ms) SoftParams{m};
    stop.validate();
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t cell, std::size_t trial, Algorithm algo) {
    const std::uint64_t cell_seed = Rng::mix(master, cell);
    return Rng::mix(Rng::mix(cell_seed, trial), algo == Algorithm::em ? 0 : 1);
}

namespace {

void summarize(AlgorithmStats& s) {
    if (s.phi.empty()) return;
    double sum_phi = 0.0, sum_t = 0.0;
    for (std::size_t i = 0; i < s.phi.size(); ++i) {
        sum_phi += s.phi[i];
        sum_t += s.seconds[i];
    }
    const auto n = static_cast<double>(s.phi.size());
    s.avg_phi = sum_phi / n;
    s.min_phi = *std::min_element(s.phi.begin(), s.phi.end());
    s.avg_time = sum_t / n;
}

}  // namespace

TrialStats run_experiment(const ExperimentSpec& spec, const Dataset& data) {
    spec.validate();
    struct Task {
        std::size_t cell;
        std::size_t trial;
        Algorithm algo;
    };
    TrialStats stats;
    std::vector<Task> tasks;
    for (double m : spec.ms) {
        for (std::size_t k : spec.ks) {
            const std::size_t cell = stats.cells.size();
            CellStats cs;
            cs.m = m;
            cs.k = k;
            for (Algorithm a : spec.algorithms) {
                auto& slot = a == Algorithm::em ? cs.em : cs.empp;
                slot.phi.assign(spec.trials, 0.0);
                slot.seconds.assign(spec.trials, 0.0);
                for (std::size_t t = 0; t < spec.trials; ++t) tasks.push_back({cell, t, a});
            }
            stats.cells.push_back(std::move(cs));
        }
    }

    auto run_task = [&](const Task& task) {
        CellStats& cs = stats.cells[task.cell];
        const SoftParams params(cs.m);
        Rng rng(trial_seed(spec.seed, task.cell, task.trial, task.algo));
        ClusterResult r = task.algo == Algorithm::em ? em_random(data, cs.k, params, spec.stop, rng)
                                                     : em_plus_plus(data, cs.k, params, spec.stop, rng);
        auto& slot = task.algo == Algorithm::em ? cs.em : cs.empp;
        slot.phi[task.trial] = r.report.final_potential;
        slot.seconds[task.trial] = r.report.wall_time.count();
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(spec.threads, tasks.size()));
    if (workers == 1) {
        for (const auto& t : tasks) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) run_task(tasks[i]);
            });
        }
    }

    for (auto& cs : stats.cells) {
        summarize(cs.em);
        summarize(cs.empp);
    }
    return stats;
}

TrialStats run_experiment(const ExperimentSpec& spec) {
    return run_experiment(spec, load_dataset(spec.source, spec.seed));
}

std::optional<double> improvement(double em, double empp) {
    if (em == 0.0) return std::nullopt;
    return 100.0 * (1.0 - empp / em);
}

TableFormat parse_format(const std::string& name) {
    if (name.empty() || name == "md" || name == "markdown") return TableFormat::markdown;
    if (name == "csv") return TableFormat::csv;
    throw Error("unknown table format '" + name + "' (expected md or csv)");
}

namespace {

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

struct RowCells {
    std::string m, k, em_avg, avg_imp, em_min, min_imp, em_time, time_imp;
};

RowCells row_cells(const CellStats& c, bool csv) {
    const char* value = csv ? "%.10g" : "%.4g";
    const char* phi = csv ? "%.10g" : "%.3e";
    const char* secs = csv ? "%.10g" : "%.3f";
    const char* pct = csv ? "%.6f" : "%.2f%%";
    auto imp = [&](double em, double empp) -> std::string {
        if (c.em.empty() || c.empp.empty()) return csv ? "" : "n/a";
        auto v = improvement(em, empp);
        return v ? fmt(pct, *v) : (csv ? "" : "n/a");
    };
    auto em_val = [&](const char* p, double v) -> std::string {
        return c.em.empty() ? (csv ? "" : "n/a") : fmt(p, v);
    };
    return {fmt(value, c.m),
            std::to_string(c.k),
            em_val(phi, c.em.avg_phi),
            imp(c.em.avg_phi, c.empp.avg_phi),
            em_val(phi, c.em.min_phi),
            imp(c.em.min_phi, c.empp.min_phi),
            em_val(secs, c.em.avg_time),
            imp(c.em.avg_time, c.empp.avg_time)};
}

}  // namespace

std::string emit_table(const TrialStats& stats, TableFormat format) {
    if (stats.cells.empty()) throw Error("emit_table: no statistics");
    std::ostringstream out;
    if (format == TableFormat::csv) {
        out << "m,k,em_avg_phi,empp_avg_phi_improvement_pct,em_min_phi,empp_min_phi_improvement_pct,"
               "em_avg_time_s,empp_avg_time_improvement_pct\n";
        for (const auto& c : stats.cells) {
            const auto r = row_cells(c, true);
            out << r.m << ',' << r.k << ',' << r.em_avg << ',' << r.avg_imp << ',' << r.em_min << ',' << r.min_imp
                << ',' << r.em_time << ',' << r.time_imp << '\n';
        }
        return out.str();
    }
    out << "| m | k | Average Φ EM | Average Φ EM++ | Minimum Φ EM | Minimum Φ EM++ | Average T EM (s) | "
           "Average T EM++ |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    for (const auto& c : stats.cells) {
        const auto r = row_cells(c, false);
        out << "| " << r.m << " | " << r.k << " | " << r.em_avg << " | " << r.avg_imp << " | " << r.em_min << " | "
            << r.min_imp << " | " << r.em_time << " | " << r.time_imp << " |\n";
    }
    out << "\nEM++ columns give the improvement over EM: 100% x (1 - EM++ / EM).\n";
    return out.str();
}

}  // namespace softkm::bench
