#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>

#include "dynctrl/graph.hpp"

namespace dynctrl {

/// Mixes `stream` into `seed` (SplitMix64 finalizer) to give independent
/// substreams for the initial graph and for each rewiring round.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

/// Parameters of one synthetic dynamic network: a directed ER graph with
/// round(n*k/2) edges (average total degree k) rewired t-1 times at ratio r.
struct SynthConfig {
    std::uint32_t n = 500;
    double k = 4.0;
    double r = 0.1;
    std::uint32_t t = 50;
    std::uint64_t seed = 1;

    std::size_t edge_count() const;
    /// Throws std::invalid_argument when the configuration cannot be generated.
    void validate() const;
};

/// Simple digraph on nodes 0..n-1 with exactly round(n*k/2) distinct edges
/// drawn uniformly from the n(n-1) ordered pairs. Snapshot index 1.
Snapshot er_directed(std::uint32_t n, double k, std::uint64_t seed);

/// Replaces round(r*L) uniformly chosen edges with as many new edges drawn
/// uniformly from the pairs absent from `s`. The node set and the edge count
/// are preserved; the result has index s.index() + 1.
Snapshot rewire(const Snapshot& s, double r, std::uint64_t seed);

/// Snapshot 1 from er_directed, then t-1 successive rewirings.
TemporalNetwork generate_dynamic(const SynthConfig& cfg);

}  // namespace dynctrl
