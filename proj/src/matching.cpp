#include "dynctrl/matching.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace dynctrl {

namespace {

using LocalIndex = Snapshot::LocalIndex;
constexpr LocalIndex kNone = Snapshot::npos;

// Mate arrays over local indices: in_mate[v] is the out-copy matched to v-,
// out_mate[u] the in-copy matched to u+.
struct MateTable {
    std::vector<LocalIndex> in_mate;
    std::vector<LocalIndex> out_mate;

    explicit MateTable(std::size_t n) : in_mate(n, kNone), out_mate(n, kNone) {}

    void link(LocalIndex u, LocalIndex v) {
        out_mate[u] = v;
        in_mate[v] = u;
    }
};

MateTable to_table(const Snapshot& s, const Matching& m) {
    MateTable table(s.node_count());
    for (const Edge& e : m.pairs()) {
        if (!s.has_edge(e)) {
            throw std::invalid_argument("matching pair (" + std::to_string(e.src.value) + "," +
                                        std::to_string(e.dst.value) + ") is not an edge of snapshot " +
                                        std::to_string(s.index()));
        }
        table.link(*s.local_index(e.src), *s.local_index(e.dst));
    }
    return table;
}

Matching to_matching(const Snapshot& s, const MateTable& table) {
    std::vector<Edge> pairs;
    for (LocalIndex u = 0; u < table.out_mate.size(); ++u) {
        if (table.out_mate[u] != kNone) {
            pairs.push_back({s.node_at(u), s.node_at(table.out_mate[u])});
        }
    }
    return Matching(std::move(pairs));
}

// Depth-first search for an augmenting path rooted at a free in-copy.
// Neighbors are explored in ascending NodeId. Out-copies carrying the current
// stamp are skipped; the caller keeps the stamp across failed searches, since
// a region that failed once stays dead until the matching changes.
class AugmentingSearch {
public:
    AugmentingSearch(const Snapshot& s, MateTable& table) : s_(s), table_(table), visited_(s.node_count(), 0) {}

    void invalidate() { ++stamp_; }

    bool augment_from(LocalIndex root) {
        stack_.clear();
        stack_.push_back({root, 0, kNone});
        while (!stack_.empty()) {
            Frame& top = stack_.back();
            const auto sources = s_.in_neighbors(top.in_node);
            if (top.next == sources.size()) {
                stack_.pop_back();
                continue;
            }
            const LocalIndex u = sources[top.next++];
            if (visited_[u] == stamp_) {
                continue;
            }
            visited_[u] = stamp_;
            top.via = u;
            const LocalIndex mate = table_.out_mate[u];
            if (mate == kNone) {
                for (const Frame& f : stack_) {
                    table_.link(f.via, f.in_node);
                }
                return true;
            }
            stack_.push_back({mate, 0, kNone});
        }
        return false;
    }

private:
    struct Frame {
        LocalIndex in_node;
        std::size_t next;
        LocalIndex via;
    };

    const Snapshot& s_;
    MateTable& table_;
    std::vector<std::uint32_t> visited_;
    std::uint32_t stamp_ = 1;
    std::vector<Frame> stack_;
};

// Hopcroft-Karp over the split graph, searching from the in-copies. Free
// in-copies and their neighbors are scanned in ascending NodeId.
class HopcroftKarp {
public:
    explicit HopcroftKarp(const Snapshot& s)
        : s_(s), table_(s.node_count()), dist_(s.node_count()), cursor_(s.node_count()) {}

    MateTable run() {
        while (layer()) {
            std::fill(cursor_.begin(), cursor_.end(), 0);
            for (LocalIndex v = 0; v < s_.node_count(); ++v) {
                if (table_.in_mate[v] == kNone) {
                    descend(v);
                }
            }
        }
        return std::move(table_);
    }

private:
    static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

    // BFS layering from the free in-copies; true if a free out-copy is reachable.
    bool layer() {
        std::vector<LocalIndex> queue;
        for (LocalIndex v = 0; v < s_.node_count(); ++v) {
            if (table_.in_mate[v] == kNone) {
                dist_[v] = 0;
                queue.push_back(v);
            } else {
                dist_[v] = kInf;
            }
        }
        bool reachable_free = false;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const LocalIndex v = queue[head];
            for (LocalIndex u : s_.in_neighbors(v)) {
                const LocalIndex w = table_.out_mate[u];
                if (w == kNone) {
                    reachable_free = true;
                } else if (dist_[w] == kInf) {
                    dist_[w] = dist_[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        return reachable_free;
    }

    bool descend(LocalIndex v) {
        const auto sources = s_.in_neighbors(v);
        for (auto& i = cursor_[v]; i < sources.size(); ++i) {
            const LocalIndex u = sources[i];
            const LocalIndex w = table_.out_mate[u];
            if (w == kNone || (dist_[w] == dist_[v] + 1 && descend(w))) {
                table_.link(u, v);
                return true;
            }
        }
        dist_[v] = kInf;
        return false;
    }

    const Snapshot& s_;
    MateTable table_;
    std::vector<std::uint32_t> dist_;
    std::vector<std::size_t> cursor_;
};

DriverSet collect_drivers(const Snapshot& s, const MateTable& table, std::span<const NodeId> priority) {
    DriverSet result{s.index(), {}};
    for (LocalIndex v = 0; v < s.node_count(); ++v) {
        if (table.in_mate[v] == kNone) {
            result.drivers.push_back(s.node_at(v));
        }
    }
    if (result.drivers.empty() && s.node_count() > 0) {
        result.drivers.push_back(priority.empty() ? s.nodes().back() : priority.back());
    }
    return result;
}

}  // namespace

Matching::Matching(std::vector<Edge> pairs) : pairs_(std::move(pairs)) {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    std::vector<NodeId> sources;
    std::vector<NodeId> targets;
    for (const Edge& e : pairs_) {
        sources.push_back(e.src);
        targets.push_back(e.dst);
    }
    std::sort(targets.begin(), targets.end());
    // sources are already sorted because pairs_ is.
    if (std::adjacent_find(sources.begin(), sources.end()) != sources.end()) {
        throw std::invalid_argument("matching has two pairs sharing a source");
    }
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end()) {
        throw std::invalid_argument("matching has two pairs sharing a target");
    }
}

bool Matching::contains(const Edge& e) const { return std::binary_search(pairs_.begin(), pairs_.end(), e); }

bool Matching::is_matching_of(const Snapshot& s) const {
    return std::all_of(pairs_.begin(), pairs_.end(), [&](const Edge& e) { return s.has_edge(e); });
}

bool DriverSet::contains(NodeId v) const { return std::binary_search(drivers.begin(), drivers.end(), v); }

Matching hopcroft_karp(const Snapshot& s) { return to_matching(s, HopcroftKarp(s).run()); }

Matching restrict_matching(const Matching& prev, const Snapshot& s) {
    std::vector<Edge> kept;
    for (const Edge& e : prev.pairs()) {
        if (s.has_edge(e)) {
            kept.push_back(e);
        }
    }
    return Matching(std::move(kept));
}

AugmentResult ordered_augment(const Snapshot& s, const Matching& seed, std::span<const NodeId> order) {
    if (order.size() != s.node_count()) {
        throw std::invalid_argument("search order has " + std::to_string(order.size()) + " entries, snapshot " +
                                    std::to_string(s.index()) + " has " + std::to_string(s.node_count()) +
                                    " nodes");
    }
    std::vector<LocalIndex> roots;
    roots.reserve(order.size());
    std::vector<bool> seen(s.node_count(), false);
    for (NodeId v : order) {
        const auto i = s.local_index(v);
        if (!i) {
            throw std::invalid_argument("search order names node " + std::to_string(v.value) +
                                        " absent from snapshot " + std::to_string(s.index()));
        }
        if (seen[*i]) {
            throw std::invalid_argument("search order repeats node " + std::to_string(v.value));
        }
        seen[*i] = true;
        roots.push_back(*i);
    }

    MateTable table = to_table(s, seed);
    AugmentingSearch search(s, table);
    bool augmented = true;
    while (augmented) {
        augmented = false;
        search.invalidate();
        for (LocalIndex v : roots) {
            if (table.in_mate[v] == kNone && search.augment_from(v)) {
                augmented = true;
                search.invalidate();
            }
        }
    }
    return {to_matching(s, table), collect_drivers(s, table, order)};
}

DriverSet drivers_of(const Snapshot& s, const Matching& m, std::span<const NodeId> priority) {
    return collect_drivers(s, to_table(s, m), priority);
}

bool has_augmenting_path(const Snapshot& s, const Matching& m) {
    MateTable table = to_table(s, m);
    AugmentingSearch search(s, table);
    for (LocalIndex v = 0; v < s.node_count(); ++v) {
        if (table.in_mate[v] == kNone && search.augment_from(v)) {
            return true;
        }
    }
    return false;
}

}  // namespace dynctrl
