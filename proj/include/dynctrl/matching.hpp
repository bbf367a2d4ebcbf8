#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynctrl/graph.hpp"

namespace dynctrl {

/// A set of snapshot edges no two of which share a source or share a target.
///
/// Equivalently a matching in the bipartite split graph where every node v
/// becomes an out-copy v+ and an in-copy v-, and an edge u->v becomes u+ -- v-.
class Matching {
public:
    Matching() = default;
    /// Throws std::invalid_argument if two pairs share a source or a target.
    explicit Matching(std::vector<Edge> pairs);

    std::span<const Edge> pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }
    bool contains(const Edge& e) const;
    /// True when every pair is an edge of `s`.
    bool is_matching_of(const Snapshot& s) const;

    friend bool operator==(const Matching&, const Matching&) = default;

private:
    std::vector<Edge> pairs_;
};

/// Minimum driver-node set of one snapshot.
struct DriverSet {
    std::size_t snapshot_index = 0;
    std::vector<NodeId> drivers;  // ascending

    std::size_t size() const { return drivers.size(); }
    bool contains(NodeId v) const;

    friend bool operator==(const DriverSet&, const DriverSet&) = default;
};

struct AugmentResult {
    Matching matching;
    DriverSet drivers;
};

/// Maximum matching by Hopcroft-Karp, iterating nodes in ascending NodeId.
Matching hopcroft_karp(const Snapshot& s);

/// Pairs of `prev` that are still edges of `s` (so both endpoints exist in `s`).
Matching restrict_matching(const Matching& prev, const Snapshot& s);

/// Grows `seed` to a maximum matching by augmenting from unmatched in-copies,
/// visiting roots in `order`, with passes repeated until one finds nothing.
/// Roots early in `order` get matched first; whatever stays unmatched forms the
/// driver set. Throws std::invalid_argument if `order` is not a permutation of
/// the snapshot's nodes or `seed` is not a matching of `s`.
AugmentResult ordered_augment(const Snapshot& s, const Matching& seed, std::span<const NodeId> order);

/// Nodes with no matched in-edge. Under a perfect matching the driver set is
/// the single highest-priority node: the last entry of `priority`, or the
/// largest NodeId when `priority` is empty. An empty snapshot has no drivers.
DriverSet drivers_of(const Snapshot& s, const Matching& m, std::span<const NodeId> priority = {});

/// True if some augmenting path exists for `m` in `s`, i.e. `m` is not maximum.
bool has_augmenting_path(const Snapshot& s, const Matching& m);

}  // namespace dynctrl
