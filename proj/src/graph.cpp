#include "dynctrl/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynctrl {

Snapshot::Snapshot(std::size_t index, std::vector<Edge> edges, std::vector<NodeId> extra_nodes)
    : index_(index), edges_(std::move(edges)) {
    for (const Edge& e : edges_) {
        if (e.src == e.dst) {
            throw std::invalid_argument("self-loop on node " + std::to_string(e.src.value) + " in snapshot " +
                                        std::to_string(index_));
        }
    }
    std::sort(edges_.begin(), edges_.end());
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    nodes_ = std::move(extra_nodes);
    nodes_.reserve(nodes_.size() + 2 * edges_.size());
    for (const Edge& e : edges_) {
        nodes_.push_back(e.src);
        nodes_.push_back(e.dst);
    }
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

    // CSR adjacency in both directions. Edges are sorted by (src, dst), so the
    // out lists come out ascending; in lists are filled in src order, which is
    // ascending as well.
    const std::size_t n = nodes_.size();
    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    std::vector<std::pair<LocalIndex, LocalIndex>> local_edges;
    local_edges.reserve(edges_.size());
    for (const Edge& e : edges_) {
        const LocalIndex u = *local_index(e.src);
        const LocalIndex v = *local_index(e.dst);
        local_edges.emplace_back(u, v);
        ++out_offsets_[u + 1];
        ++in_offsets_[v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out_offsets_[i + 1] += out_offsets_[i];
        in_offsets_[i + 1] += in_offsets_[i];
    }
    out_targets_.resize(edges_.size());
    in_sources_.resize(edges_.size());
    std::vector<std::uint32_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<std::uint32_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
    for (const auto& [u, v] : local_edges) {
        out_targets_[out_fill[u]++] = v;
        in_sources_[in_fill[v]++] = u;
    }
}

std::optional<Snapshot::LocalIndex> Snapshot::local_index(NodeId v) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), v);
    if (it == nodes_.end() || *it != v) {
        return std::nullopt;
    }
    return static_cast<LocalIndex>(it - nodes_.begin());
}

Snapshot::LocalIndex Snapshot::require_local(NodeId v) const {
    if (auto i = local_index(v)) {
        return *i;
    }
    throw std::out_of_range("node " + std::to_string(v.value) + " is not in snapshot " + std::to_string(index_));
}

bool Snapshot::has_edge(const Edge& e) const { return std::binary_search(edges_.begin(), edges_.end(), e); }

std::size_t degree(const Snapshot& s, NodeId v) {
    const auto i = s.require_local(v);
    return s.out_neighbors(i).size() + s.in_neighbors(i).size();
}

std::vector<Edge> incident_edges(const Snapshot& s, NodeId v) {
    const auto i = s.require_local(v);
    std::vector<Edge> result;
    result.reserve(s.out_neighbors(i).size() + s.in_neighbors(i).size());
    for (auto w : s.out_neighbors(i)) {
        result.push_back({v, s.node_at(w)});
    }
    for (auto u : s.in_neighbors(i)) {
        result.push_back({s.node_at(u), v});
    }
    std::sort(result.begin(), result.end());
    return result;
}

NodeId NodeRegistry::intern(std::string_view label) {
    const std::string key(label);
    if (auto it = ids_.find(key); it != ids_.end()) {
        return it->second;
    }
    const NodeId id{static_cast<std::uint32_t>(labels_.size())};
    ids_.emplace(key, id);
    labels_.push_back(key);
    return id;
}

std::optional<NodeId> NodeRegistry::find(std::string_view label) const {
    if (auto it = ids_.find(std::string(label)); it != ids_.end()) {
        return it->second;
    }
    return std::nullopt;
}

std::string NodeRegistry::label(NodeId v) const {
    if (v.value < labels_.size()) {
        return labels_[v.value];
    }
    return std::to_string(v.value);
}

TemporalNetwork::TemporalNetwork(std::vector<Snapshot> snapshots, NodeRegistry registry)
    : snapshots_(std::move(snapshots)), registry_(std::move(registry)) {
    for (std::size_t i = 0; i < snapshots_.size(); ++i) {
        if (snapshots_[i].index() != i + 1) {
            throw std::invalid_argument("snapshot at position " + std::to_string(i) + " has index " +
                                        std::to_string(snapshots_[i].index()) + ", expected " +
                                        std::to_string(i + 1));
        }
    }
}

}  // namespace dynctrl
