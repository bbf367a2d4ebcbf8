#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dynctrl {

/// Globally unique node identity. The same real-world entity keeps the same
/// NodeId in every snapshot of a TemporalNetwork.
struct NodeId {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

inline std::ostream& operator<<(std::ostream& os, NodeId v) { return os << v.value; }

struct Edge {
    NodeId src;
    NodeId dst;

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Edge& e) {
    return os << '(' << e.src << ',' << e.dst << ')';
}

}  // namespace dynctrl

template <>
struct std::hash<dynctrl::NodeId> {
    std::size_t operator()(dynctrl::NodeId v) const noexcept { return std::hash<std::uint32_t>{}(v.value); }
};

template <>
struct std::hash<dynctrl::Edge> {
    std::size_t operator()(const dynctrl::Edge& e) const noexcept {
        return std::hash<std::uint64_t>{}((std::uint64_t{e.src.value} << 32) | e.dst.value);
    }
};

namespace dynctrl {

/// One directed graph G_t of a temporal sequence.
///
/// Immutable after construction. Nodes are kept in ascending NodeId order and
/// addressed internally by their position ("local index"), so iterating local
/// indices in order is the same as iterating NodeIds in order. Adjacency lists
/// are sorted the same way.
class Snapshot {
public:
    using LocalIndex = std::uint32_t;
    static constexpr LocalIndex npos = static_cast<LocalIndex>(-1);

    Snapshot() = default;

    /// Builds a snapshot from an edge list. Duplicate edges collapse; a
    /// self-loop throws std::invalid_argument. `extra_nodes` declares nodes
    /// that may be isolated.
    Snapshot(std::size_t index, std::vector<Edge> edges, std::vector<NodeId> extra_nodes = {});

    std::size_t index() const { return index_; }
    std::span<const NodeId> nodes() const { return nodes_; }
    std::span<const Edge> edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    bool contains(NodeId v) const { return local_index(v).has_value(); }
    bool has_edge(const Edge& e) const;

    std::optional<LocalIndex> local_index(NodeId v) const;
    /// Throws std::out_of_range naming the node and snapshot when absent.
    LocalIndex require_local(NodeId v) const;
    NodeId node_at(LocalIndex i) const { return nodes_[i]; }

    std::span<const LocalIndex> out_neighbors(LocalIndex v) const {
        return {out_targets_.data() + out_offsets_[v], out_targets_.data() + out_offsets_[v + 1]};
    }
    std::span<const LocalIndex> in_neighbors(LocalIndex v) const {
        return {in_sources_.data() + in_offsets_[v], in_sources_.data() + in_offsets_[v + 1]};
    }

    friend bool operator==(const Snapshot& a, const Snapshot& b) {
        return a.index_ == b.index_ && a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
    }

private:
    std::size_t index_ = 1;
    std::vector<NodeId> nodes_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> out_offsets_{0};
    std::vector<LocalIndex> out_targets_;
    std::vector<std::uint32_t> in_offsets_{0};
    std::vector<LocalIndex> in_sources_;
};

/// In-degree plus out-degree; a reciprocal pair contributes 2.
std::size_t degree(const Snapshot& s, NodeId v);

/// Edges of `s` having `v` as source or target, in ascending (src, dst) order.
std::vector<Edge> incident_edges(const Snapshot& s, NodeId v);

/// Maps external labels to NodeIds in first-appearance order.
class NodeRegistry {
public:
    NodeId intern(std::string_view label);
    std::optional<NodeId> find(std::string_view label) const;
    /// External label of `v`; falls back to the decimal id when unregistered.
    std::string label(NodeId v) const;
    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }

private:
    std::unordered_map<std::string, NodeId> ids_;
    std::vector<std::string> labels_;
};

/// Ordered sequence of snapshots with consecutive indices starting at 1.
class TemporalNetwork {
public:
    TemporalNetwork() = default;
    explicit TemporalNetwork(std::vector<Snapshot> snapshots, NodeRegistry registry = {});

    std::span<const Snapshot> snapshots() const { return snapshots_; }
    const Snapshot& operator[](std::size_t i) const { return snapshots_[i]; }
    std::size_t size() const { return snapshots_.size(); }
    bool empty() const { return snapshots_.empty(); }
    const NodeRegistry& registry() const { return registry_; }

private:
    std::vector<Snapshot> snapshots_;
    NodeRegistry registry_;
};

/// |a ∩ b| / |a ∪ b| over two ascending, duplicate-free ranges; 0 on an empty union.
template <typename T>
double jaccard(std::span<const T> a, std::span<const T> b) {
    std::size_t common = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++common;
            ++ia;
            ++ib;
        }
    }
    const std::size_t united = a.size() + b.size() - common;
    return united == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(united);
}

}  // namespace dynctrl
