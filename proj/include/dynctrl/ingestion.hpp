#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynctrl/graph.hpp"

namespace dynctrl {

/// Malformed or unusable input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EdgeEvent {
    std::string src;
    std::string dst;
    std::int64_t timestamp = 0;
};

struct ParseReport {
    std::vector<EdgeEvent> events;  // file order
    std::size_t lines = 0;
    std::size_t comments = 0;
    std::size_t malformed = 0;
    std::size_t self_loops = 0;
    std::vector<std::string> diagnostics;  // first few malformed lines
};

/// Parses "src dst timestamp [...]" lines. Blank lines and lines starting with
/// '#' or '%' are skipped; self-loops and malformed lines are counted. Throws
/// DataError when no line yields an event.
ParseReport parse_edge_events(std::istream& in);

/// Reads a file, transparently decompressing names ending in ".gz".
ParseReport read_edge_events(const std::filesystem::path& path);

struct WindowSpec {
    std::int64_t tau = 1;
    std::optional<std::int64_t> t0;  // defaults to the minimum timestamp
};

struct WindowResult {
    TemporalNetwork network;
    std::vector<std::size_t> raw_event_counts;  // per window, before dedup
    std::size_t before_start = 0;               // events earlier than t0
};

/// Splits events into half-open windows [t0 + (n-1)tau, t0 + n*tau), ending
/// with the window containing the latest timestamp. Empty windows are kept.
/// Labels are registered over the whole event list in first-appearance order.
WindowResult window_events(const std::vector<EdgeEvent>& events, const WindowSpec& spec);

/// Writes "src dst snapshot_index" lines using registry labels.
void write_edge_list(std::ostream& out, const TemporalNetwork& net);

}  // namespace dynctrl
