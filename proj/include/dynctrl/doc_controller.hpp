#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynctrl/graph.hpp"
#include "dynctrl/matching.hpp"

namespace dynctrl {

/// Number of snapshot transitions summed into node stability: a positive
/// count, or all transitions seen so far.
class WindowLength {
public:
    static WindowLength all() { return WindowLength(); }
    static WindowLength of(std::uint32_t transitions);
    /// Accepts a positive integer or "all".
    static WindowLength parse(const std::string& text);

    bool is_all() const { return !value_.has_value(); }
    std::uint32_t value() const { return value_.value(); }
    std::string to_string() const { return is_all() ? "all" : std::to_string(*value_); }

    friend bool operator==(const WindowLength&, const WindowLength&) = default;

private:
    WindowLength() = default;
    std::optional<std::uint32_t> value_;
};

enum class Algorithm { doc, mm };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& text);

struct ControlScheme {
    Algorithm algorithm = Algorithm::doc;
    WindowLength window = WindowLength::of(1);
    std::vector<DriverSet> mds_sequence;
};

/// Jaccard similarity of v's incident edges in `cur` and `prev`; 0 when v is
/// absent from `prev` or both incident sets are empty.
double edge_similarity(NodeId v, const Snapshot& cur, const Snapshot& prev);

/// degree(s, v) / (N - 1), within [0, 2]. A single-node snapshot gives 0.
double degree_centrality(NodeId v, const Snapshot& s);

/// 2l * [in_prev_mds] + sigma. `sigma` must lie in [0, 2l]; the closed upper
/// end is reachable by a node reciprocally linked to every other node in
/// every window. Throws std::invalid_argument otherwise, or when l is 0.
double importance(double sigma, bool in_prev_mds, std::uint32_t l);

/// Per-node ingredients of one stability term.
struct StabilityTerm {
    double similarity = 0.0;
    double centrality = 0.0;

    double product() const { return similarity * centrality; }
};

/// Stability terms recorded for the transition into snapshot `to_index`.
struct TransitionTerms {
    std::size_t to_index = 0;
    std::unordered_map<NodeId, StabilityTerm> terms;
};

/// Cross-snapshot state threaded through DOC: the rolling window of stability
/// terms plus the previous snapshot, matching, and driver set.
class WeightState {
public:
    explicit WeightState(WindowLength window) : window_(window) {}

    WindowLength window() const { return window_; }
    const std::deque<TransitionTerms>& history() const { return history_; }
    const std::optional<Snapshot>& prev_snapshot() const { return prev_snapshot_; }
    const Matching& prev_matching() const { return prev_matching_; }
    const DriverSet& prev_mds() const { return prev_mds_; }
    std::size_t processed() const { return processed_; }

    /// Separation constant l used in the importance coefficient 2l when
    /// scoring the next snapshot. With an unbounded window this is the number
    /// of transitions available, at least 1.
    std::uint32_t effective_window() const;

    /// Stored terms of earlier transitions that still fall inside the window
    /// once the incoming transition is counted, most recent first.
    std::vector<const TransitionTerms*> retained_terms() const;

    /// Records the transition into `cur` and its outcome.
    void advance(const Snapshot& cur, std::optional<TransitionTerms> terms, Matching matching, DriverSet mds);

private:
    WindowLength window_;
    std::deque<TransitionTerms> history_;
    std::optional<Snapshot> prev_snapshot_;
    Matching prev_matching_;
    DriverSet prev_mds_;
    std::size_t processed_ = 0;
};

/// Sum over the window of edge_similarity * degree_centrality for `v`,
/// counting the transition prev -> cur plus up to l-1 earlier ones. Zero on
/// the first snapshot.
double stability(NodeId v, const WeightState& state, const Snapshot& cur);

struct NodeImportance {
    NodeId node;
    double sigma = 0.0;
    bool in_prev_mds = false;
    double q = 0.0;
};

struct StepResult {
    DriverSet drivers;
    Matching matching;
    std::vector<NodeImportance> importance;  // ascending NodeId
    std::vector<NodeId> order;               // augmenting-search root order
    std::uint32_t window = 1;                // l used for the 2l coefficient
};

/// Orders nodes by ascending q, then previous non-drivers before previous
/// drivers, then ascending NodeId.
std::vector<NodeId> search_order(std::vector<NodeImportance> importance);

/// The DOC control loop: one step per snapshot, in index order.
class DocController {
public:
    explicit DocController(WindowLength window) : state_(window) {}

    /// Throws std::invalid_argument if `cur` does not directly follow the
    /// previously processed snapshot.
    StepResult step(const Snapshot& cur);

    const WeightState& state() const { return state_; }

private:
    WeightState state_;
};

using StepObserver = std::function<void(const Snapshot&, const StepResult&)>;

/// DOC over the whole network.
ControlScheme run(const TemporalNetwork& net, WindowLength window, const StepObserver& observer = {});

/// Independent Hopcroft-Karp matching per snapshot, no warm start.
ControlScheme run_baseline(const TemporalNetwork& net);

}  // namespace dynctrl
