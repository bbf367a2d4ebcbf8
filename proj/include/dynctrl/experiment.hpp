#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dynctrl/doc_controller.hpp"
#include "dynctrl/ingestion.hpp"
#include "dynctrl/metrics.hpp"
#include "dynctrl/synth.hpp"

namespace dynctrl {

/// Grid of synthetic dynamic networks: every (k, r) pair, `replicates` times.
struct GridSpec {
    std::uint32_t n = 500;
    std::vector<double> k_values{2.0, 4.0, 6.0, 8.0};
    std::vector<double> r_values{0.05, 0.1, 0.2, 0.3};
    std::uint32_t t = 50;
    std::uint64_t seed = 1;
    std::uint32_t replicates = 1;

    /// N = 10000, k = 2.0..8.0 step 0.2, r = 0.01..0.30 step 0.01, 100 snapshots.
    static GridSpec full();
    void validate() const;
};

/// Where a temporal network comes from, with enough detail to rebuild it.
struct NetworkSource {
    std::string instance_id;
    std::optional<SynthConfig> synth;
    std::filesystem::path dataset;
    WindowSpec window;

    /// Canonical description of the recipe; the config hash is taken over it.
    std::string describe() const;
    std::string config_hash() const;
    TemporalNetwork load() const;
};

/// Instances in (k, r, replicate) order. The instance seed depends on
/// (seed, k index, replicate) only, so each r starts from the same ER graph.
std::vector<NetworkSource> grid_instances(const GridSpec& grid);
NetworkSource dataset_source(const std::filesystem::path& path, const WindowSpec& window);

/// One line per instance: instance,n,k,r,t,seed,config_hash.
void write_manifest(std::ostream& out, std::span<const NetworkSource> sources);
std::vector<NetworkSource> read_manifest(std::istream& in);

struct ExperimentPlan {
    std::vector<NetworkSource> sources;
    std::vector<Algorithm> algorithms{Algorithm::doc, Algorithm::mm};
    std::vector<WindowLength> windows{WindowLength::of(5)};
};

struct SnapshotRow {
    std::size_t index = 0;
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t mds_size = 0;
    std::optional<std::size_t> ecc_step;         // absent for the first snapshot
    std::optional<SimilarityPair> similarity;  // with the previous snapshot
};

struct RunRecord {
    std::string run_id;
    std::string instance_id;
    std::string config_hash;
    std::optional<SynthConfig> synth;
    std::size_t node_total = 0;
    Algorithm algorithm = Algorithm::doc;
    std::optional<WindowLength> window;  // DOC only
    CostReport cost;
    std::vector<SnapshotRow> snapshots;
    std::string error;  // non-empty when the cell failed

    bool ok() const { return error.empty(); }
};

/// Runs every (source, algorithm, window) cell on up to `workers` threads.
/// Each source is loaded once and released after its last cell. Records come
/// back in plan order regardless of scheduling.
std::vector<RunRecord> run_experiment(const ExperimentPlan& plan, unsigned workers = 1);

/// Scores one network under one algorithm.
RunRecord run_cell(const NetworkSource& source, const TemporalNetwork& net, Algorithm algorithm,
                   std::optional<WindowLength> window);

void write_summary_csv(std::ostream& out, std::span<const RunRecord> records);
void write_snapshot_csv(std::ostream& out, std::span<const RunRecord> records);
void write_summary_json(std::ostream& out, std::span<const RunRecord> records);

/// Shortest round-trip decimal form.
std::string format_number(double value);

struct SummaryRow {
    std::string run_id;
    std::string instance;
    std::string algorithm;
    std::string l;
    std::string k;
    std::string r;
    std::size_t umds = 0;
    std::size_t ecc_total = 0;
};

std::vector<SummaryRow> read_summary_csv(std::istream& in);

struct SnapshotCsvRow {
    std::string instance;
    std::string algorithm;
    std::string l;
    std::size_t index = 0;
    std::optional<std::size_t> ecc_step;
};

std::vector<SnapshotCsvRow> read_snapshot_csv(std::istream& in);

/// Restricts rows to one algorithm and, optionally, one window: "DOC:5", "MM", "DOC".
struct RowSelector {
    std::optional<std::string> algorithm;
    std::optional<std::string> l;

    static RowSelector parse(const std::string& text);
    bool matches(const std::string& algorithm_field, const std::string& l_field) const;
};

/// a / b, with 0 / 0 taken as 1 (both schemes equally churn-free).
double cost_ratio(std::size_t a, std::size_t b);

struct InstanceRatio {
    std::string instance;
    std::string k;
    std::string r;
    std::size_t ecc_a = 0;
    std::size_t ecc_b = 0;
    std::size_t umds_a = 0;
    std::size_t umds_b = 0;
    double ecc_ratio = 1.0;
    double umds_ratio = 1.0;
};

struct CellRatio {
    std::string k;
    std::string r;
    std::size_t instances = 0;
    double mean_ecc_ratio = 0.0;
    double mean_umds_ratio = 0.0;
};

struct SnapshotRatio {
    std::string instance;
    std::size_t index = 0;
    std::size_t ecc_a = 0;
    std::size_t ecc_b = 0;
    double ecc_ratio = 1.0;
};

struct CompareReport {
    std::vector<InstanceRatio> instances;
    std::vector<CellRatio> cells;
    std::vector<SnapshotRatio> snapshots;
};

/// Joins two result sets on instance id. Each side must have exactly one
/// selected row per instance and both sides the same instances; otherwise
/// throws DataError naming the offending keys.
CompareReport compare_runs(std::span<const SummaryRow> a, const RowSelector& select_a,
                           std::span<const SummaryRow> b, const RowSelector& select_b);

/// Adds per-snapshot ECC ratios joined on (instance, snapshot index).
void compare_snapshots(CompareReport& report, std::span<const SnapshotCsvRow> a, const RowSelector& select_a,
                       std::span<const SnapshotCsvRow> b, const RowSelector& select_b);

void write_compare_csv(std::ostream& out, const CompareReport& report);
void write_cells_csv(std::ostream& out, const CompareReport& report);
void write_snapshot_ratios_csv(std::ostream& out, const CompareReport& report);

struct Range {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Dataset characterization: per-snapshot size and density, adjacent-snapshot
/// node and edge similarity, and the mean maximum-matching MDS size.
struct DatasetStats {
    std::size_t snapshots = 0;
    std::size_t total_nodes = 0;
    Range nodes;
    Range average_degree;  // 2L/N per snapshot
    Range node_similarity;
    Range edge_similarity;
    double mean_mds_size = 0.0;
};

DatasetStats dataset_stats(const TemporalNetwork& net);
void write_stats_csv(std::ostream& out, const std::string& name, std::int64_t tau, const DatasetStats& stats);

}  // namespace dynctrl
