// dynctrl: experiment harness for real-time driver-node selection on dynamic
// networks. Subcommands: generate, run, compare, stats.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dynctrl/experiment.hpp"

namespace {

using namespace dynctrl;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    return out;
}

void prepare_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

struct GridOptions {
    GridSpec grid;
    bool full = false;

    void add_to(CLI::App& app) {
        app.add_option("--n", grid.n, "Nodes per synthetic network")->capture_default_str();
        app.add_option("--k", grid.k_values, "Average total degrees (comma separated)")
            ->delimiter(',')
            ->capture_default_str();
        app.add_option("--r", grid.r_values, "Rewire ratios in (0,1) (comma separated)")
            ->delimiter(',')
            ->capture_default_str();
        app.add_option("--t", grid.t, "Snapshots per network")->capture_default_str();
        app.add_option("--seed", grid.seed, "Base seed")->capture_default_str();
        app.add_option("--replicates", grid.replicates, "Instances per (k, r) cell")->capture_default_str();
        app.add_flag("--full-grid", full,
                     "Full grid: n=10000, k=2.0..8.0 step 0.2, r=0.01..0.30, t=100 (930 networks, slow)");
    }

    GridSpec resolve() const {
        GridSpec g = grid;
        if (full) {
            GridSpec p = GridSpec::full();
            p.seed = grid.seed;
            p.replicates = grid.replicates;
            g = p;
        }
        g.validate();
        return g;
    }
};

int cmd_generate(const GridOptions& opts, const std::filesystem::path& out_dir, bool write_edges) {
    const auto sources = grid_instances(opts.resolve());
    prepare_dir(out_dir);
    {
        auto out = open_output(out_dir / "manifest.csv");
        write_manifest(out, sources);
    }
    if (write_edges) {
        prepare_dir(out_dir / "networks");
        for (const auto& s : sources) {
            auto out = open_output(out_dir / "networks" / (s.instance_id + ".txt"));
            out << "# " << s.describe() << '\n';
            write_edge_list(out, s.load());
        }
    }
    std::cout << "wrote " << sources.size() << " instances to " << (out_dir / "manifest.csv").string() << '\n';
    return kOk;
}

struct RunOptions {
    GridOptions grid;
    std::filesystem::path manifest;
    std::filesystem::path dataset;
    std::int64_t tau = 0;
    std::optional<std::int64_t> t0;
    std::vector<std::string> algorithms{"DOC", "MM"};
    std::vector<std::string> windows{"5"};
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::filesystem::path out_dir = "results";
    bool json = false;
};

int cmd_run(const RunOptions& opts) {
    ExperimentPlan plan;
    if (!opts.manifest.empty() && !opts.dataset.empty()) {
        throw UsageError("--manifest and --dataset are mutually exclusive");
    }
    if (!opts.manifest.empty()) {
        std::ifstream in(opts.manifest);
        if (!in) {
            throw DataError("cannot open " + opts.manifest.string());
        }
        plan.sources = read_manifest(in);
    } else if (!opts.dataset.empty()) {
        if (opts.tau <= 0) {
            throw UsageError("--tau must be positive when --dataset is given");
        }
        plan.sources.push_back(dataset_source(opts.dataset, WindowSpec{opts.tau, opts.t0}));
    } else {
        plan.sources = grid_instances(opts.grid.resolve());
    }
    plan.algorithms.clear();
    for (const auto& a : opts.algorithms) {
        plan.algorithms.push_back(parse_algorithm(a));
    }
    plan.windows.clear();
    for (const auto& w : opts.windows) {
        plan.windows.push_back(WindowLength::parse(w));
    }
    if (plan.algorithms.empty()) {
        throw UsageError("select at least one algorithm");
    }
    if (plan.windows.empty()) {
        throw UsageError("DOC needs at least one --l value");
    }

    prepare_dir(opts.out_dir);
    const auto records = run_experiment(plan, opts.workers);
    {
        auto out = open_output(opts.out_dir / "summary.csv");
        write_summary_csv(out, records);
    }
    {
        auto out = open_output(opts.out_dir / "snapshots.csv");
        write_snapshot_csv(out, records);
    }
    if (opts.json) {
        auto out = open_output(opts.out_dir / "summary.json");
        write_summary_json(out, records);
    }

    std::size_t failed = 0;
    bool data_failure = false;
    for (const auto& rec : records) {
        if (!rec.ok()) {
            ++failed;
            std::cerr << "error: " << rec.run_id << ": " << rec.error << '\n';
            data_failure = data_failure || !plan.sources.front().synth;
        }
    }
    std::cout << "ran " << records.size() - failed << "/" << records.size() << " cells; results in "
              << opts.out_dir.string() << '\n';
    if (failed > 0) {
        return data_failure ? kData : kInternal;
    }
    return kOk;
}

struct CompareOptions {
    std::filesystem::path a;
    std::filesystem::path b;
    std::string select_a;
    std::string select_b;
    std::filesystem::path snapshots_a;
    std::filesystem::path snapshots_b;
    std::filesystem::path out_dir;
};

template <typename Reader>
auto read_file(const std::filesystem::path& path, Reader reader) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return reader(in);
}

int cmd_compare(const CompareOptions& opts) {
    const auto sel_a = RowSelector::parse(opts.select_a);
    const auto sel_b = RowSelector::parse(opts.select_b);
    const auto rows_a = read_file(opts.a, read_summary_csv);
    const auto rows_b = read_file(opts.b, read_summary_csv);
    CompareReport report = compare_runs(rows_a, sel_a, rows_b, sel_b);
    if (opts.snapshots_a.empty() != opts.snapshots_b.empty()) {
        throw UsageError("--snapshots-a and --snapshots-b must be given together");
    }
    if (!opts.snapshots_a.empty()) {
        compare_snapshots(report, read_file(opts.snapshots_a, read_snapshot_csv), sel_a,
                          read_file(opts.snapshots_b, read_snapshot_csv), sel_b);
    }
    if (opts.out_dir.empty()) {
        write_compare_csv(std::cout, report);
        std::cout << '\n';
        write_cells_csv(std::cout, report);
        return kOk;
    }
    prepare_dir(opts.out_dir);
    {
        auto out = open_output(opts.out_dir / "ratios.csv");
        write_compare_csv(out, report);
    }
    {
        auto out = open_output(opts.out_dir / "cells.csv");
        write_cells_csv(out, report);
    }
    if (!report.snapshots.empty()) {
        auto out = open_output(opts.out_dir / "snapshot_ratios.csv");
        write_snapshot_ratios_csv(out, report);
    }
    std::cout << "compared " << report.instances.size() << " instances in " << report.cells.size() << " cells\n";
    return kOk;
}

int cmd_stats(const std::filesystem::path& dataset, std::int64_t tau, std::optional<std::int64_t> t0,
              const std::filesystem::path& out_dir) {
    if (tau <= 0) {
        throw UsageError("--tau must be positive");
    }
    const auto parsed = read_edge_events(dataset);
    const auto windowed = window_events(parsed.events, WindowSpec{tau, t0});
    const auto stats = dataset_stats(windowed.network);
    std::cerr << parsed.events.size() << " events, " << parsed.malformed << " malformed, " << parsed.self_loops
              << " self-loops dropped";
    if (windowed.before_start > 0) {
        std::cerr << ", " << windowed.before_start << " before t0";
    }
    std::cerr << '\n';
    const std::string name = dataset_source(dataset, WindowSpec{tau, t0}).instance_id;
    if (out_dir.empty()) {
        write_stats_csv(std::cout, name, tau, stats);
        return kOk;
    }
    prepare_dir(out_dir);
    auto out = open_output(out_dir / "stats.csv");
    write_stats_csv(out, name, tau, stats);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Real-time driver-node selection for dynamic networks (DOC vs maximum matching)"};
    app.require_subcommand(1);

    auto* generate = app.add_subcommand("generate", "Generate a synthetic ER dynamic-network grid");
    GridOptions gen_grid;
    gen_grid.add_to(*generate);
    std::filesystem::path gen_out = "networks";
    bool write_edges = false;
    generate->add_option("--out", gen_out, "Output directory")->capture_default_str();
    generate->add_flag("--write-edges", write_edges, "Also dump each network as 'src dst snapshot' lines");

    auto* run_cmd = app.add_subcommand("run", "Run DOC and/or MM and write summary and per-snapshot CSVs");
    RunOptions run_opts;
    run_opts.grid.add_to(*run_cmd);
    run_cmd->add_option("--manifest", run_opts.manifest, "Manifest written by 'generate'");
    run_cmd->add_option("--dataset", run_opts.dataset, "Timestamped edge list (src dst time), optionally .gz");
    run_cmd->add_option("--tau", run_opts.tau, "Window length in timestamp units (with --dataset)");
    run_cmd->add_option("--t0", run_opts.t0, "Start of the first window (default: earliest timestamp)");
    run_cmd->add_option("--algorithms", run_opts.algorithms, "DOC, MM")->delimiter(',')->capture_default_str();
    run_cmd->add_option("--l", run_opts.windows, "DOC window lengths (positive integers or 'all')")
        ->delimiter(',')
        ->capture_default_str();
    run_cmd->add_option("--workers", run_opts.workers, "Worker threads")->check(CLI::PositiveNumber);
    run_cmd->add_option("--out", run_opts.out_dir, "Output directory")->capture_default_str();
    run_cmd->add_flag("--json", run_opts.json, "Also write summary.json");

    auto* compare = app.add_subcommand("compare", "Ratios of ECC and UMDS between two result sets (A / B)");
    CompareOptions cmp;
    compare->add_option("a", cmp.a, "summary.csv for the numerator")->required()->check(CLI::ExistingFile);
    compare->add_option("b", cmp.b, "summary.csv for the denominator")->required()->check(CLI::ExistingFile);
    compare->add_option("--select-a", cmp.select_a, "Row filter for A, e.g. DOC:5");
    compare->add_option("--select-b", cmp.select_b, "Row filter for B, e.g. MM");
    compare->add_option("--snapshots-a", cmp.snapshots_a, "snapshots.csv for A (per-snapshot ratios)");
    compare->add_option("--snapshots-b", cmp.snapshots_b, "snapshots.csv for B");
    compare->add_option("--out", cmp.out_dir, "Output directory (default: print to stdout)");

    auto* stats = app.add_subcommand("stats", "Per-dataset snapshot statistics (N, K, S_n, S_e, MDS size)");
    std::filesystem::path stats_dataset;
    std::int64_t stats_tau = 0;
    std::optional<std::int64_t> stats_t0;
    std::filesystem::path stats_out;
    stats->add_option("--dataset", stats_dataset, "Timestamped edge list")->required();
    stats->add_option("--tau", stats_tau, "Window length")->required();
    stats->add_option("--t0", stats_t0, "Start of the first window");
    stats->add_option("--out", stats_out, "Output directory (default: print to stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (generate->parsed()) {
            return cmd_generate(gen_grid, gen_out, write_edges);
        }
        if (run_cmd->parsed()) {
            return cmd_run(run_opts);
        }
        if (compare->parsed()) {
            return cmd_compare(cmp);
        }
        return cmd_stats(stats_dataset, stats_tau, stats_t0, stats_out);
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}
