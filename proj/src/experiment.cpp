#include "dynctrl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"

namespace dynctrl {

namespace {

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        if (!field.empty() && field.back() == '\r') {
            field.pop_back();
        }
        fields.push_back(field);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

// Header-addressed view over a simple comma-separated file.
class CsvTable {
public:
    CsvTable(std::istream& in, const std::vector<std::string>& required) {
        std::string line;
        if (!std::getline(in, line)) {
            throw DataError("empty CSV input");
        }
        const auto header = split_csv_line(line);
        for (std::size_t i = 0; i < header.size(); ++i) {
            columns_[header[i]] = i;
        }
        std::string missing;
        for (const auto& name : required) {
            if (!columns_.contains(name)) {
                missing += (missing.empty() ? "" : ", ") + name;
            }
        }
        if (!missing.empty()) {
            throw DataError("CSV is missing column(s): " + missing);
        }
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line == "\r") {
                continue;
            }
            auto fields = split_csv_line(line);
            if (fields.size() != header.size()) {
                throw DataError("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                " fields, expected " + std::to_string(header.size()));
            }
            rows_.push_back(std::move(fields));
            line_numbers_.push_back(line_no);
        }
    }

    std::size_t size() const { return rows_.size(); }
    const std::string& get(std::size_t row, const std::string& column) const {
        return rows_[row][columns_.at(column)];
    }
    std::size_t get_count(std::size_t row, const std::string& column) const {
        const std::string& text = get(row, column);
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw DataError("CSV line " + std::to_string(line_numbers_[row]) + ": column " + column +
                            " is not a count: '" + text + "'");
        }
        return value;
    }
    double get_number(std::size_t row, const std::string& column) const {
        const std::string& text = get(row, column);
        double value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw DataError("CSV line " + std::to_string(line_numbers_[row]) + ": column " + column +
                            " is not a number: '" + text + "'");
        }
        return value;
    }

private:
    std::unordered_map<std::string, std::size_t> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::size_t> line_numbers_;
};

Range range_of(const std::vector<double>& values) {
    if (values.empty()) {
        return {};
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {sum / static_cast<double>(values.size()), *lo, *hi};
}

std::string run_label(Algorithm algorithm, const std::optional<WindowLength>& window) {
    if (algorithm == Algorithm::doc && window) {
        return "DOC-l" + window->to_string();
    }
    return to_string(algorithm);
}

}  // namespace

std::string format_number(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

GridSpec GridSpec::full() {
    GridSpec grid;
    grid.n = 10000;
    grid.t = 100;
    grid.k_values.clear();
    for (int i = 0; i <= 30; ++i) {
        grid.k_values.push_back((20 + 2 * i) / 10.0);
    }
    grid.r_values.clear();
    for (int i = 1; i <= 30; ++i) {
        grid.r_values.push_back(i / 100.0);
    }
    return grid;
}

void GridSpec::validate() const {
    if (k_values.empty() || r_values.empty()) {
        throw std::invalid_argument("grid needs at least one k and one r value");
    }
    if (replicates < 1) {
        throw std::invalid_argument("replicates must be at least 1");
    }
    for (double k : k_values) {
        for (double r : r_values) {
            SynthConfig{n, k, r, t, seed}.validate();
        }
    }
}

std::string NetworkSource::describe() const {
    if (synth) {
        return "er;n=" + std::to_string(synth->n) + ";k=" + format_number(synth->k) + ";r=" +
               format_number(synth->r) + ";t=" + std::to_string(synth->t) + ";seed=" + std::to_string(synth->seed);
    }
    return "dataset;file=" + dataset.filename().string() + ";tau=" + std::to_string(window.tau) +
           ";t0=" + (window.t0 ? std::to_string(*window.t0) : std::string("auto"));
}

std::string NetworkSource::config_hash() const {
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(fnv1a(describe())));
    return buffer;
}

TemporalNetwork NetworkSource::load() const {
    if (synth) {
        return generate_dynamic(*synth);
    }
    return window_events(read_edge_events(dataset).events, window).network;
}

std::vector<NetworkSource> grid_instances(const GridSpec& grid) {
    grid.validate();
    std::vector<NetworkSource> sources;
    for (double k : grid.k_values) {
        for (double r : grid.r_values) {
            for (std::uint32_t rep = 0; rep < grid.replicates; ++rep) {
                NetworkSource source;
                const std::uint64_t seed = derive_seed(grid.seed, {std::bit_cast<std::uint64_t>(k), rep});
                source.synth = SynthConfig{grid.n, k, r, grid.t, seed};
                source.instance_id = "er-n" + std::to_string(grid.n) + "-k" + format_number(k) + "-r" +
                                     format_number(r) + "-t" + std::to_string(grid.t) + "-rep" + std::to_string(rep);
                sources.push_back(std::move(source));
            }
        }
    }
    return sources;
}

NetworkSource dataset_source(const std::filesystem::path& path, const WindowSpec& window) {
    NetworkSource source;
    source.dataset = path;
    source.window = window;
    std::string stem = path.filename().string();
    if (stem.ends_with(".gz")) {
        stem.resize(stem.size() - 3);
    }
    if (auto dot = stem.rfind('.'); dot != std::string::npos && dot > 0) {
        stem.resize(dot);
    }
    source.instance_id = stem + "-tau" + std::to_string(window.tau);
    return source;
}

void write_manifest(std::ostream& out, std::span<const NetworkSource> sources) {
    out << "instance,n,k,r,t,seed,config_hash\n";
    for (const auto& s : sources) {
        if (!s.synth) {
            continue;
        }
        out << s.instance_id << ',' << s.synth->n << ',' << format_number(s.synth->k) << ','
            << format_number(s.synth->r) << ',' << s.synth->t << ',' << s.synth->seed << ',' << s.config_hash()
            << '\n';
    }
}

std::vector<NetworkSource> read_manifest(std::istream& in) {
    CsvTable table(in, {"instance", "n", "k", "r", "t", "seed"});
    std::vector<NetworkSource> sources;
    for (std::size_t i = 0; i < table.size(); ++i) {
        NetworkSource s;
        s.instance_id = table.get(i, "instance");
        SynthConfig cfg;
        cfg.n = static_cast<std::uint32_t>(table.get_count(i, "n"));
        cfg.k = table.get_number(i, "k");
        cfg.r = table.get_number(i, "r");
        cfg.t = static_cast<std::uint32_t>(table.get_count(i, "t"));
        cfg.seed = table.get_count(i, "seed");
        cfg.validate();
        s.synth = cfg;
        sources.push_back(std::move(s));
    }
    return sources;
}

RunRecord run_cell(const NetworkSource& source, const TemporalNetwork& net, Algorithm algorithm,
                   std::optional<WindowLength> window) {
    RunRecord rec;
    rec.instance_id = source.instance_id;
    rec.config_hash = source.config_hash();
    rec.synth = source.synth;
    rec.node_total = source.synth ? source.synth->n : net.registry().size();
    rec.algorithm = algorithm;
    if (algorithm == Algorithm::doc) {
        rec.window = window.value_or(WindowLength::of(5));
    }
    rec.run_id = rec.instance_id + "/" + run_label(algorithm, rec.window);

    const ControlScheme scheme = algorithm == Algorithm::doc ? run(net, *rec.window) : run_baseline(net);
    rec.cost = cost_report(scheme);
    rec.snapshots.reserve(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        SnapshotRow row;
        row.index = net[i].index();
        row.nodes = net[i].node_count();
        row.edges = net[i].edge_count();
        row.mds_size = rec.cost.mds_sizes[i];
        if (i > 0) {
            row.ecc_step = rec.cost.ecc_series[i - 1];
            row.similarity = snapshot_similarity(net[i - 1], net[i]);
        }
        rec.snapshots.push_back(row);
    }
    return rec;
}

std::vector<RunRecord> run_experiment(const ExperimentPlan& plan, unsigned workers) {
    struct Cell {
        std::size_t source;
        Algorithm algorithm;
        std::optional<WindowLength> window;
    };
    struct Slot {
        std::mutex mutex;
        std::shared_ptr<const TemporalNetwork> network;
        std::size_t remaining = 0;
    };

    std::vector<Cell> cells;
    std::vector<Slot> slots(plan.sources.size());
    for (std::size_t s = 0; s < plan.sources.size(); ++s) {
        for (Algorithm a : plan.algorithms) {
            if (a == Algorithm::doc) {
                for (const auto& w : plan.windows) {
                    cells.push_back({s, a, w});
                }
            } else {
                cells.push_back({s, a, std::nullopt});
            }
        }
    }
    for (const Cell& c : cells) {
        ++slots[c.source].remaining;
    }

    std::vector<RunRecord> records(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& cell = cells[i];
            const NetworkSource& source = plan.sources[cell.source];
            Slot& slot = slots[cell.source];
            try {
                std::shared_ptr<const TemporalNetwork> net;
                {
                    std::lock_guard lock(slot.mutex);
                    if (!slot.network) {
                        slot.network = std::make_shared<const TemporalNetwork>(source.load());
                    }
                    net = slot.network;
                }
                records[i] = run_cell(source, *net, cell.algorithm, cell.window);
            } catch (const std::exception& e) {
                RunRecord& rec = records[i];
                rec.instance_id = source.instance_id;
                rec.algorithm = cell.algorithm;
                rec.window = cell.window;
                rec.run_id = source.instance_id + "/" + run_label(cell.algorithm, cell.window);
                rec.error = e.what();
            }
            std::lock_guard lock(slot.mutex);
            if (--slot.remaining == 0) {
                slot.network.reset();
            }
        }
    };

    const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));
    if (count == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < count; ++i) {
            pool.emplace_back(work);
        }
    }
    return records;
}

void write_summary_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << "run_id,instance,algorithm,l,n,k,r,T,seed,config_hash,umds,ecc_total,mean_mds_size\n";
    for (const auto& rec : records) {
        if (!rec.ok()) {
            continue;
        }
        out << rec.run_id << ',' << rec.instance_id << ',' << to_string(rec.algorithm) << ','
            << (rec.window ? rec.window->to_string() : "") << ',' << rec.node_total << ',';
        if (rec.synth) {
            out << format_number(rec.synth->k) << ',' << format_number(rec.synth->r) << ',';
        } else {
            out << ",,";
        }
        out << rec.cost.mds_sizes.size() << ',' << (rec.synth ? std::to_string(rec.synth->seed) : "") << ','
            << rec.config_hash << ',' << rec.cost.umds << ',' << rec.cost.ecc_total << ','
            << format_number(rec.cost.mean_mds_size()) << '\n';
    }
}

void write_snapshot_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << "run_id,instance,algorithm,l,snapshot_index,node_count,edge_count,mds_size,ecc_step,s_n,s_e\n";
    for (const auto& rec : records) {
        if (!rec.ok()) {
            continue;
        }
        for (const auto& row : rec.snapshots) {
            out << rec.run_id << ',' << rec.instance_id << ',' << to_string(rec.algorithm) << ','
                << (rec.window ? rec.window->to_string() : "") << ',' << row.index << ',' << row.nodes << ','
                << row.edges << ',' << row.mds_size << ',';
            if (row.ecc_step) {
                out << *row.ecc_step;
            }
            out << ',';
            if (row.similarity) {
                out << format_number(row.similarity->nodes) << ',' << format_number(row.similarity->edges);
            } else {
                out << ',';
            }
            out << '\n';
        }
    }
}

void write_summary_json(std::ostream& out, std::span<const RunRecord> records) {
    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& rec : records) {
        if (!rec.ok()) {
            continue;
        }
        nlohmann::ordered_json j;
        j["run_id"] = rec.run_id;
        j["instance"] = rec.instance_id;
        j["algorithm"] = to_string(rec.algorithm);
        j["l"] = rec.window ? nlohmann::ordered_json(rec.window->to_string()) : nlohmann::ordered_json(nullptr);
        j["n"] = rec.node_total;
        if (rec.synth) {
            j["k"] = rec.synth->k;
            j["r"] = rec.synth->r;
            j["seed"] = rec.synth->seed;
        }
        j["T"] = rec.cost.mds_sizes.size();
        j["config_hash"] = rec.config_hash;
        j["umds"] = rec.cost.umds;
        j["ecc_total"] = rec.cost.ecc_total;
        j["ecc_series"] = rec.cost.ecc_series;
        j["mds_sizes"] = rec.cost.mds_sizes;
        runs.push_back(std::move(j));
    }
    out << runs.dump(2) << '\n';
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
    CsvTable table(in, {"run_id", "instance", "algorithm", "l", "k", "r", "umds", "ecc_total"});
    std::vector<SummaryRow> rows;
    rows.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        rows.push_back({table.get(i, "run_id"), table.get(i, "instance"), table.get(i, "algorithm"),
                        table.get(i, "l"), table.get(i, "k"), table.get(i, "r"), table.get_count(i, "umds"),
                        table.get_count(i, "ecc_total")});
    }
    return rows;
}

std::vector<SnapshotCsvRow> read_snapshot_csv(std::istream& in) {
    CsvTable table(in, {"instance", "algorithm", "l", "snapshot_index", "ecc_step"});
    std::vector<SnapshotCsvRow> rows;
    rows.reserve(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        SnapshotCsvRow row{table.get(i, "instance"), table.get(i, "algorithm"), table.get(i, "l"),
                           table.get_count(i, "snapshot_index"), std::nullopt};
        if (!table.get(i, "ecc_step").empty()) {
            row.ecc_step = table.get_count(i, "ecc_step");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

RowSelector RowSelector::parse(const std::string& text) {
    RowSelector sel;
    if (text.empty()) {
        return sel;
    }
    const auto colon = text.find(':');
    sel.algorithm = to_string(parse_algorithm(text.substr(0, colon)));
    if (colon != std::string::npos) {
        sel.l = WindowLength::parse(text.substr(colon + 1)).to_string();
    }
    return sel;
}

bool RowSelector::matches(const std::string& algorithm_field, const std::string& l_field) const {
    return (!algorithm || *algorithm == algorithm_field) && (!l || *l == l_field);
}

double cost_ratio(std::size_t a, std::size_t b) {
    if (b == 0) {
        return a == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(a) / static_cast<double>(b);
}

namespace {

template <typename Row>
std::map<std::string, const Row*> index_rows(std::span<const Row> rows, const RowSelector& sel, const char* side,
                                             auto key_of, std::vector<std::string>* order) {
    std::map<std::string, const Row*> index;
    for (const Row& row : rows) {
        if (!sel.matches(row.algorithm, row.l)) {
            continue;
        }
        const std::string key = key_of(row);
        if (!index.emplace(key, &row).second) {
            throw DataError(std::string("result set ") + side + " has several rows for " + key +
                            "; narrow it with a selector such as DOC:5 or MM");
        }
        if (order) {
            order->push_back(key);
        }
    }
    return index;
}

template <typename Row>
void require_same_keys(const std::map<std::string, const Row*>& a, const std::map<std::string, const Row*>& b) {
    std::string missing;
    std::size_t count = 0;
    auto note = [&](const std::string& key, const char* where) {
        if (count++ < 20) {
            missing += "\n  " + key + " (missing from " + where + ")";
        }
    };
    for (const auto& [key, row] : a) {
        if (!b.contains(key)) {
            note(key, "B");
        }
    }
    for (const auto& [key, row] : b) {
        if (!a.contains(key)) {
            note(key, "A");
        }
    }
    if (count > 0) {
        throw DataError("result sets do not cover the same keys (" + std::to_string(count) + " unmatched):" +
                        missing);
    }
}

}  // namespace

CompareReport compare_runs(std::span<const SummaryRow> a, const RowSelector& select_a, std::span<const SummaryRow> b,
                           const RowSelector& select_b) {
    auto key = [](const SummaryRow& r) { return r.instance; };
    std::vector<std::string> order;
    const auto index_a = index_rows(a, select_a, "A", key, &order);
    const auto index_b = index_rows(b, select_b, "B", key, nullptr);
    if (index_a.empty()) {
        throw DataError("no rows selected from result set A");
    }
    require_same_keys(index_a, index_b);

    CompareReport report;
    std::vector<std::pair<std::string, std::string>> cell_order;
    std::map<std::pair<std::string, std::string>, CellRatio> cells;
    for (const auto& instance : order) {
        const SummaryRow& ra = *index_a.at(instance);
        const SummaryRow& rb = *index_b.at(instance);
        InstanceRatio ratio{instance,   ra.k,      ra.r,
                            ra.ecc_total, rb.ecc_total, ra.umds, rb.umds,
                            cost_ratio(ra.ecc_total, rb.ecc_total), cost_ratio(ra.umds, rb.umds)};
        report.instances.push_back(ratio);
        const auto cell_key = std::make_pair(ra.k, ra.r);
        auto [it, inserted] = cells.try_emplace(cell_key, CellRatio{ra.k, ra.r, 0, 0.0, 0.0});
        if (inserted) {
            cell_order.push_back(cell_key);
        }
        ++it->second.instances;
        it->second.mean_ecc_ratio += ratio.ecc_ratio;
        it->second.mean_umds_ratio += ratio.umds_ratio;
    }
    for (const auto& k : cell_order) {
        CellRatio cell = cells.at(k);
        cell.mean_ecc_ratio /= static_cast<double>(cell.instances);
        cell.mean_umds_ratio /= static_cast<double>(cell.instances);
        report.cells.push_back(cell);
    }
    return report;
}

void compare_snapshots(CompareReport& report, std::span<const SnapshotCsvRow> a, const RowSelector& select_a,
                       std::span<const SnapshotCsvRow> b, const RowSelector& select_b) {
    auto key = [](const SnapshotCsvRow& r) {
        char buffer[16];
        std::snprintf(buffer, sizeof buffer, "%08zu", r.index);
        return r.instance + "#" + buffer;
    };
    std::vector<std::string> order;
    const auto index_a = index_rows(a, select_a, "A", key, &order);
    const auto index_b = index_rows(b, select_b, "B", key, nullptr);
    require_same_keys(index_a, index_b);
    for (const auto& k : order) {
        const SnapshotCsvRow& ra = *index_a.at(k);
        const SnapshotCsvRow& rb = *index_b.at(k);
        if (!ra.ecc_step || !rb.ecc_step) {
            continue;
        }
        report.snapshots.push_back(
            {ra.instance, ra.index, *ra.ecc_step, *rb.ecc_step, cost_ratio(*ra.ecc_step, *rb.ecc_step)});
    }
}

void write_compare_csv(std::ostream& out, const CompareReport& report) {
    out << "instance,k,r,ecc_a,ecc_b,ecc_ratio,umds_a,umds_b,umds_ratio\n";
    for (const auto& row : report.instances) {
        out << row.instance << ',' << row.k << ',' << row.r << ',' << row.ecc_a << ',' << row.ecc_b << ','
            << format_number(row.ecc_ratio) << ',' << row.umds_a << ',' << row.umds_b << ','
            << format_number(row.umds_ratio) << '\n';
    }
}

void write_cells_csv(std::ostream& out, const CompareReport& report) {
    out << "k,r,instances,mean_ecc_ratio,mean_umds_ratio\n";
    for (const auto& cell : report.cells) {
        out << cell.k << ',' << cell.r << ',' << cell.instances << ',' << format_number(cell.mean_ecc_ratio) << ','
            << format_number(cell.mean_umds_ratio) << '\n';
    }
}

void write_snapshot_ratios_csv(std::ostream& out, const CompareReport& report) {
    out << "instance,snapshot_index,ecc_a,ecc_b,ecc_ratio\n";
    for (const auto& row : report.snapshots) {
        out << row.instance << ',' << row.index << ',' << row.ecc_a << ',' << row.ecc_b << ','
            << format_number(row.ecc_ratio) << '\n';
    }
}

DatasetStats dataset_stats(const TemporalNetwork& net) {
    DatasetStats stats;
    stats.snapshots = net.size();
    stats.total_nodes = net.registry().size();
    std::vector<double> nodes;
    std::vector<double> degrees;
    std::vector<double> node_sim;
    std::vector<double> edge_sim;
    double mds_total = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const Snapshot& s = net[i];
        nodes.push_back(static_cast<double>(s.node_count()));
        degrees.push_back(s.node_count() == 0 ? 0.0
                                              : 2.0 * static_cast<double>(s.edge_count()) /
                                                    static_cast<double>(s.node_count()));
        mds_total += static_cast<double>(drivers_of(s, hopcroft_karp(s)).size());
        if (i > 0) {
            const auto sim = snapshot_similarity(net[i - 1], s);
            node_sim.push_back(sim.nodes);
            edge_sim.push_back(sim.edges);
        }
    }
    stats.nodes = range_of(nodes);
    stats.average_degree = range_of(degrees);
    stats.node_similarity = range_of(node_sim);
    stats.edge_similarity = range_of(edge_sim);
    stats.mean_mds_size = net.empty() ? 0.0 : mds_total / static_cast<double>(net.size());
    return stats;
}

void write_stats_csv(std::ostream& out, const std::string& name, std::int64_t tau, const DatasetStats& stats) {
    out << "dataset,tau,T,total_nodes,n_mean,n_min,n_max,k_mean,k_min,k_max,sn_mean,sn_min,sn_max,se_mean,se_min,"
           "se_max,mean_mds_size\n";
    auto put = [&](const Range& r) {
        out << ',' << format_number(r.mean) << ',' << format_number(r.min) << ',' << format_number(r.max);
    };
    out << name << ',' << tau << ',' << stats.snapshots << ',' << stats.total_nodes;
    put(stats.nodes);
    put(stats.average_degree);
    put(stats.node_similarity);
    put(stats.edge_similarity);
    out << ',' << format_number(stats.mean_mds_size) << '\n';
}

}  // namespace dynctrl
