#include "dynctrl/ingestion.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <zlib.h>

namespace dynctrl {

namespace {

constexpr std::size_t kMaxDiagnostics = 5;

bool parse_timestamp(std::string_view text, std::int64_t& out) {
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size() && out >= 0;
}

std::string read_gzip(const std::filesystem::path& path) {
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) {
        throw DataError("cannot open " + path.string());
    }
    std::string content;
    char buffer[1 << 16];
    int got = 0;
    while ((got = gzread(file, buffer, sizeof buffer)) > 0) {
        content.append(buffer, static_cast<std::size_t>(got));
    }
    const bool failed = got < 0;
    gzclose(file);
    if (failed) {
        throw DataError("corrupt gzip stream in " + path.string());
    }
    return content;
}

}  // namespace

ParseReport parse_edge_events(std::istream& in) {
    ParseReport report;
    std::string line;
    while (std::getline(in, line)) {
        ++report.lines;
        std::istringstream fields(line);
        std::string src;
        std::string dst;
        std::string ts;
        if (!(fields >> src)) {
            ++report.comments;  // blank
            continue;
        }
        if (src.front() == '#' || src.front() == '%') {
            ++report.comments;
            continue;
        }
        std::int64_t timestamp = 0;
        if (!(fields >> dst >> ts) || !parse_timestamp(ts, timestamp)) {
            ++report.malformed;
            if (report.diagnostics.size() < kMaxDiagnostics) {
                report.diagnostics.push_back("line " + std::to_string(report.lines) + ": '" + line + "'");
            }
            continue;
        }
        if (src == dst) {
            ++report.self_loops;
            continue;
        }
        report.events.push_back({std::move(src), std::move(dst), timestamp});
    }
    if (report.events.empty()) {
        std::string message = "no usable edge events in " + std::to_string(report.lines) + " lines (" +
                              std::to_string(report.malformed) + " malformed, " +
                              std::to_string(report.self_loops) + " self-loops)";
        for (const auto& d : report.diagnostics) {
            message += "\n  " + d;
        }
        throw DataError(message);
    }
    return report;
}

ParseReport read_edge_events(const std::filesystem::path& path) {
    if (path.extension() == ".gz") {
        std::istringstream in(read_gzip(path));
        return parse_edge_events(in);
    }
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string());
    }
    return parse_edge_events(in);
}

WindowResult window_events(const std::vector<EdgeEvent>& events, const WindowSpec& spec) {
    if (spec.tau <= 0) {
        throw std::invalid_argument("tau must be positive");
    }
    if (events.empty()) {
        throw DataError("cannot window an empty event list");
    }
    const auto [lo, hi] = std::minmax_element(events.begin(), events.end(),
                                              [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
    const std::int64_t start = spec.t0.value_or(lo->timestamp);
    const std::int64_t t_max = hi->timestamp;

    WindowResult result;
    NodeRegistry registry;
    for (const auto& e : events) {
        registry.intern(e.src);
        registry.intern(e.dst);
    }
    if (t_max < start) {
        throw DataError("every event precedes the window start " + std::to_string(start));
    }
    const auto windows = static_cast<std::size_t>((t_max - start) / spec.tau) + 1;
    std::vector<std::vector<Edge>> edges(windows);
    result.raw_event_counts.assign(windows, 0);
    for (const auto& e : events) {
        if (e.timestamp < start) {
            ++result.before_start;
            continue;
        }
        const auto w = static_cast<std::size_t>((e.timestamp - start) / spec.tau);
        edges[w].push_back({*registry.find(e.src), *registry.find(e.dst)});
        ++result.raw_event_counts[w];
    }
    std::vector<Snapshot> snapshots;
    snapshots.reserve(windows);
    for (std::size_t w = 0; w < windows; ++w) {
        snapshots.emplace_back(w + 1, std::move(edges[w]));
    }
    result.network = TemporalNetwork(std::move(snapshots), std::move(registry));
    return result;
}

void write_edge_list(std::ostream& out, const TemporalNetwork& net) {
    const auto& registry = net.registry();
    for (const Snapshot& s : net.snapshots()) {
        for (const Edge& e : s.edges()) {
            out << registry.label(e.src) << ' ' << registry.label(e.dst) << ' ' << s.index() << '\n';
        }
    }
}

}  // namespace dynctrl
