#include "dynctrl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace dynctrl {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Ordered pairs without self-loops, indexed 0..n(n-1)-1.
Edge pair_at(std::uint64_t index, std::uint32_t n) {
    const auto src = static_cast<std::uint32_t>(index / (n - 1));
    auto dst = static_cast<std::uint32_t>(index % (n - 1));
    if (dst >= src) {
        ++dst;
    }
    return {NodeId{src}, NodeId{dst}};
}

std::uint64_t index_of(const Edge& e, std::uint32_t n) {
    const std::uint64_t dst = e.dst.value > e.src.value ? e.dst.value - 1 : e.dst.value;
    return std::uint64_t{e.src.value} * (n - 1) + dst;
}

std::uint64_t pair_count(std::uint32_t n) { return std::uint64_t{n} * (n - 1); }

std::vector<NodeId> all_nodes(std::uint32_t n) {
    std::vector<NodeId> nodes(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        nodes[i] = NodeId{i};
    }
    return nodes;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t s : stream) {
        h = splitmix64(h ^ splitmix64(s + 0x632be59bd9b4e019ULL));
    }
    return h;
}

std::size_t SynthConfig::edge_count() const { return static_cast<std::size_t>(std::llround(n * k / 2.0)); }

void SynthConfig::validate() const {
    if (n < 2) {
        throw std::invalid_argument("n must be at least 2");
    }
    if (!(k > 0.0)) {
        throw std::invalid_argument("k must be positive");
    }
    if (!(r > 0.0 && r < 1.0)) {
        throw std::invalid_argument("r must lie in (0, 1), got " + std::to_string(r));
    }
    if (t < 1) {
        throw std::invalid_argument("t must be at least 1");
    }
    const std::size_t l = edge_count();
    if (l < 1) {
        throw std::invalid_argument("n*k/2 rounds to zero edges");
    }
    if (l > pair_count(n)) {
        throw std::invalid_argument("n*k/2 = " + std::to_string(l) + " exceeds the " +
                                    std::to_string(pair_count(n)) + " possible directed edges");
    }
    const auto replaced = static_cast<std::size_t>(std::llround(r * static_cast<double>(l)));
    if (t > 1 && replaced > pair_count(n) - l) {
        throw std::invalid_argument("graph too dense to rewire " + std::to_string(replaced) + " edges");
    }
}

Snapshot er_directed(std::uint32_t n, double k, std::uint64_t seed) {
    if (n < 2) {
        throw std::invalid_argument("n must be at least 2");
    }
    const auto l = static_cast<std::uint64_t>(std::llround(n * k / 2.0));
    const std::uint64_t total = pair_count(n);
    if (l > total) {
        throw std::invalid_argument("n*k/2 = " + std::to_string(l) + " exceeds the " + std::to_string(total) +
                                    " possible directed edges");
    }
    std::mt19937_64 rng(seed);
    // Floyd's sampling: l distinct indices, each l-subset equally likely.
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(l);
    for (std::uint64_t j = total - l; j < total; ++j) {
        const std::uint64_t t = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
        if (!chosen.insert(t).second) {
            chosen.insert(j);
        }
    }
    std::vector<std::uint64_t> picked(chosen.begin(), chosen.end());
    std::sort(picked.begin(), picked.end());
    std::vector<Edge> edges;
    edges.reserve(l);
    for (auto idx : picked) {
        edges.push_back(pair_at(idx, n));
    }
    return Snapshot(1, std::move(edges), all_nodes(n));
}

Snapshot rewire(const Snapshot& s, double r, std::uint64_t seed) {
    if (!(r > 0.0 && r < 1.0)) {
        throw std::invalid_argument("r must lie in (0, 1), got " + std::to_string(r));
    }
    const auto n = static_cast<std::uint32_t>(s.node_count());
    if (n < 2) {
        throw std::invalid_argument("cannot rewire a snapshot with fewer than 2 nodes");
    }
    // Pair indexing assumes nodes 0..n-1; map through local indices otherwise.
    auto to_local = [&](const Edge& e) {
        return Edge{NodeId{*s.local_index(e.src)}, NodeId{*s.local_index(e.dst)}};
    };
    auto to_global = [&](const Edge& e) { return Edge{s.node_at(e.src.value), s.node_at(e.dst.value)}; };

    const std::size_t l = s.edge_count();
    const auto replaced = static_cast<std::size_t>(std::llround(r * static_cast<double>(l)));
    const std::uint64_t total = pair_count(n);
    if (replaced > total - l) {
        throw std::invalid_argument("graph too dense to rewire " + std::to_string(replaced) + " edges");
    }

    std::mt19937_64 rng(seed);
    std::vector<Edge> removed;
    removed.reserve(replaced);
    std::sample(s.edges().begin(), s.edges().end(), std::back_inserter(removed), replaced, rng);
    std::sort(removed.begin(), removed.end());

    std::unordered_set<std::uint64_t> present;
    present.reserve(l + replaced);
    for (const Edge& e : s.edges()) {
        present.insert(index_of(to_local(e), n));
    }

    std::vector<Edge> added;
    added.reserve(replaced);
    const std::uint64_t absent = total - l;
    if (absent <= 4 * replaced || absent <= 4096) {
        std::vector<std::uint64_t> candidates;
        candidates.reserve(absent);
        for (std::uint64_t i = 0; i < total; ++i) {
            if (!present.contains(i)) {
                candidates.push_back(i);
            }
        }
        std::vector<std::uint64_t> picked;
        std::sample(candidates.begin(), candidates.end(), std::back_inserter(picked), replaced, rng);
        for (auto i : picked) {
            added.push_back(to_global(pair_at(i, n)));
        }
    } else {
        std::uniform_int_distribution<std::uint64_t> draw(0, total - 1);
        while (added.size() < replaced) {
            const std::uint64_t i = draw(rng);
            if (present.insert(i).second) {
                added.push_back(to_global(pair_at(i, n)));
            }
        }
    }

    std::vector<Edge> edges;
    edges.reserve(l);
    std::set_difference(s.edges().begin(), s.edges().end(), removed.begin(), removed.end(),
                        std::back_inserter(edges));
    edges.insert(edges.end(), added.begin(), added.end());
    return Snapshot(s.index() + 1, std::move(edges), std::vector<NodeId>(s.nodes().begin(), s.nodes().end()));
}

TemporalNetwork generate_dynamic(const SynthConfig& cfg) {
    cfg.validate();
    std::vector<Snapshot> snapshots;
    snapshots.reserve(cfg.t);
    snapshots.push_back(er_directed(cfg.n, cfg.k, derive_seed(cfg.seed, {0})));
    for (std::uint32_t i = 2; i <= cfg.t; ++i) {
        snapshots.push_back(rewire(snapshots.back(), cfg.r, derive_seed(cfg.seed, {i})));
    }
    return TemporalNetwork(std::move(snapshots));
}

}  // namespace dynctrl
