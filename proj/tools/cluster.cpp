#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "softkm/bench.hpp"
#include "softkm/core.hpp"
#include "softkm/stream_cash.hpp"
#include "softkm/stream_window.hpp"

using namespace softkm;

namespace {

struct Input {
    std::unique_ptr<std::ifstream> file;
    std::istream* stream = nullptr;
    std::string name;
};

Input open_input(const std::string& path) {
    Input in;
    if (path.empty() || path == "-") {
        in.stream = &std::cin;
        in.name = "<stdin>";
    } else {
        in.file = std::make_unique<std::ifstream>(path);
        if (!*in.file) throw Error("cannot open '" + path + "'");
        in.stream = in.file.get();
        in.name = path;
    }
    return in;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_centers(std::ostringstream& out, const CenterSet& centers, const std::string& prefix) {
    for (std::size_t i = 0; i < centers.size(); ++i) {
        out << prefix << i;
        for (double c : centers.center(i)) out << ',' << fmt_double(c);
        out << '\n';
    }
}

std::string center_header(std::size_t dim, const std::string& leading) {
    std::string h = leading + "center";
    for (std::size_t j = 0; j < dim; ++j) h += ",x" + std::to_string(j);
    return h + "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hard and soft k-means with k-means++ seeding, streaming and sliding-window clustering"};
    app.require_subcommand(1);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Compare EM and EM++ over a grid of (m, k)");
    std::string dataset;
    std::vector<std::size_t> ks{10, 25, 50};
    std::vector<double> ms{0.1, 0.25, 0.5};
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    std::vector<std::string> algos{"em", "empp"};
    std::string out_path, format;
    std::size_t threads = 1;
    StopRule stop;
    bench_cmd->add_option("--dataset", dataset, "spam[:PATH] | cloud[:PATH] | csv:PATH | synth:N,D,C,SEP")
        ->required();
    bench_cmd->add_option("--k", ks, "Cluster counts")->delimiter(',');
    bench_cmd->add_option("--m", ms, "Fuzziness values in (0,1)")->delimiter(',');
    bench_cmd->add_option("--trials", trials, "Trials per (m, k) and algorithm");
    bench_cmd->add_option("--seed", seed, "Master seed");
    bench_cmd->add_option("--algo", algos, "em, empp")->delimiter(',');
    bench_cmd->add_option("--out", out_path, "Output path (stdout if omitted)");
    bench_cmd->add_option("--format", format, "md | csv");
    bench_cmd->add_option("--threads", threads, "Trials run in parallel");
    bench_cmd->add_option("--max-iters", stop.max_iters, "EM iteration cap");
    bench_cmd->add_option("--rel-tol", stop.rel_tol, "Relative potential change to stop at");
    bench_cmd->add_option("--move-tol", stop.move_tol, "Center displacement to stop at");

    // stream
    auto* stream_cmd = app.add_subcommand("stream", "Cash-register streaming k-means over CSV rows");
    std::string input;
    StreamConfig scfg;
    bool refine = false;
    stream_cmd->add_option("--input", input, "CSV file, '-' for stdin");
    stream_cmd->add_option("--memory", scfg.memory, "Points per level before compression")->required();
    stream_cmd->add_option("--k", scfg.k, "Number of centers")->required();
    stream_cmd->add_option("--levels", scfg.levels, "Number of levels");
    stream_cmd->add_option("--runs", scfg.sharp_runs, "k-means# repetitions per compression (0 = log2 M)");
    stream_cmd->add_option("--final-runs", scfg.final_runs, "Best-of repetitions for the final seeding");
    stream_cmd->add_option("--seed", scfg.seed, "Seed");
    stream_cmd->add_flag("--refine", refine, "Polish the final centers with weighted Lloyd");
    stream_cmd->add_option("--out", out_path, "Output path for centers (stdout if omitted)");

    // window
    auto* window_cmd = app.add_subcommand("window", "Sliding-window k-means over CSV rows");
    WindowConfig wcfg;
    std::size_t every = 0;
    window_cmd->add_option("--input", input, "CSV file, '-' for stdin");
    window_cmd->add_option("--window", wcfg.window, "Window length L in points")->required();
    window_cmd->add_option("--epsilon", wcfg.epsilon, "Memory/shift trade-off in (0, 1/2)");
    window_cmd->add_option("--k", wcfg.k, "Number of centers")->required();
    window_cmd->add_option("--query-runs", wcfg.query_runs, "Best-of repetitions per query");
    window_cmd->add_option("--seed", wcfg.seed, "Seed");
    window_cmd->add_option("--every", every, "Also query at every N-th checkpoint (0 = only at end)");
    window_cmd->add_flag("--refine", refine, "Polish centers with weighted Lloyd");
    window_cmd->add_option("--out", out_path, "Output path for centers (stdout if omitted)");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Write a Gaussian mixture as CSV");
    std::size_t n = 1000, d = 2, components = 3;
    double separation = 10.0;
    synth_cmd->add_option("--n", n, "Points");
    synth_cmd->add_option("--d", d, "Dimension");
    synth_cmd->add_option("--components", components, "Mixture components");
    synth_cmd->add_option("--separation", separation, "Minimum distance between component means");
    synth_cmd->add_option("--seed", seed, "Seed");
    synth_cmd->add_option("--out", out_path, "Output path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench_cmd->parsed()) {
            bench::ExperimentSpec spec;
            spec.source = dataset;
            spec.ks = ks;
            spec.ms = ms;
            spec.trials = trials;
            spec.seed = seed;
            spec.algorithms.clear();
            for (const auto& a : algos) spec.algorithms.push_back(bench::parse_algorithm(a));
            spec.stop = stop;
            spec.threads = threads;
            const auto fmt = bench::parse_format(format);
            const auto stats = bench::run_experiment(spec);
            write_text(out_path, bench::emit_table(stats, fmt));
        } else if (stream_cmd->parsed()) {
            Input in = open_input(input);
            bench::PointReader reader(*in.stream, in.name);
            std::optional<CashRegisterStream> stream;
            while (auto p = reader.next()) {
                if (!stream) stream.emplace(scfg, p->size());
                stream->ingest(*p);
            }
            if (!stream) throw EmptyDataset(in.name);
            Rng rng(Rng::mix(scfg.seed, 0x5eed));
            const CenterSet centers = stream->finalize(rng, refine);
            std::ostringstream out;
            out << center_header(centers.dim(), "");
            append_centers(out, centers, "");
            write_text(out_path, out.str());
            std::cerr << "ingested=" << stream->ingested() << " live_points=" << stream->live_points()
                      << " compressions=" << stream->compressions() << '\n';
        } else if (window_cmd->parsed()) {
            Input in = open_input(input);
            bench::PointReader reader(*in.stream, in.name);
            std::optional<SlidingWindowStream> win;
            std::ostringstream out;
            std::size_t checkpoints = 0;
            auto emit = [&](const SlidingWindowStream& w) {
                Rng rng(Rng::mix(wcfg.seed, w.ingested()));
                append_centers(out, w.query(rng, refine), std::to_string(w.ingested()) + ",");
            };
            while (auto p = reader.next()) {
                if (!win) {
                    win.emplace(wcfg, p->size());
                    out << center_header(p->size(), "index,");
                }
                win->insert(*p);
                if (every > 0 && win->at_checkpoint() && ++checkpoints % every == 0) emit(*win);
            }
            if (!win) throw EmptyDataset(in.name);
            if (every == 0 || !win->at_checkpoint() || checkpoints % every != 0) emit(*win);
            write_text(out_path, out.str());
            std::cerr << "ingested=" << win->ingested() << " live_points=" << win->live_points()
                      << " shift=" << wcfg.shift() << " levels=" << wcfg.levels() << '\n';
        } else if (synth_cmd->parsed()) {
            const Dataset data = bench::synth_mixture(n, d, components, separation, seed);
            std::ostringstream out;
            for (std::size_t i = 0; i < data.size(); ++i) {
                auto p = data.point(i);
                for (std::size_t j = 0; j < p.size(); ++j) out << (j ? "," : "") << fmt_double(p[j]);
                out << '\n';
            }
            write_text(out_path, out.str());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
