#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dynctrl/doc_controller.hpp"
#include "dynctrl/graph.hpp"
#include "dynctrl/matching.hpp"

namespace dynctrl {

/// Size of the union of all driver sets: the number of distinct nodes ever driven.
std::size_t umds(std::span<const DriverSet> sequence);
inline std::size_t umds(const ControlScheme& scheme) { return umds(scheme.mds_sequence); }

struct EccResult {
    std::size_t total = 0;
    std::vector<std::size_t> series;  // series[i-1] = |MDS_{i+1} \ MDS_i|
};

/// Driver churn: for each consecutive pair, drivers present now but not in
/// the previous set. Throws std::invalid_argument on fewer than 2 sets.
EccResult ecc(std::span<const DriverSet> sequence);
inline EccResult ecc(const ControlScheme& scheme) { return ecc(scheme.mds_sequence); }

struct SimilarityPair {
    double nodes = 0.0;
    double edges = 0.0;
};

/// Jaccard similarity of node sets and of edge sets.
SimilarityPair snapshot_similarity(const Snapshot& a, const Snapshot& b);

struct CostReport {
    std::size_t umds = 0;
    std::size_t ecc_total = 0;
    std::vector<std::size_t> ecc_series;  // length T-1
    std::vector<std::size_t> mds_sizes;   // length T

    double mean_mds_size() const;
};

/// All cost metrics of a scheme. A single-snapshot scheme reports zero churn.
CostReport cost_report(const ControlScheme& scheme);

}  // namespace dynctrl
