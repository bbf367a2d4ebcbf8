#include "dynctrl/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dynctrl {

std::size_t umds(std::span<const DriverSet> sequence) {
    std::vector<NodeId> all;
    for (const auto& d : sequence) {
        all.insert(all.end(), d.drivers.begin(), d.drivers.end());
    }
    std::sort(all.begin(), all.end());
    return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

EccResult ecc(std::span<const DriverSet> sequence) {
    if (sequence.size() < 2) {
        throw std::invalid_argument("ECC needs at least two driver sets, got " + std::to_string(sequence.size()));
    }
    EccResult result;
    result.series.reserve(sequence.size() - 1);
    for (std::size_t i = 1; i < sequence.size(); ++i) {
        const auto& now = sequence[i].drivers;
        const auto& before = sequence[i - 1].drivers;
        const auto added = static_cast<std::size_t>(
            std::count_if(now.begin(), now.end(), [&](NodeId v) { return !std::binary_search(before.begin(), before.end(), v); }));
        result.series.push_back(added);
        result.total += added;
    }
    return result;
}

SimilarityPair snapshot_similarity(const Snapshot& a, const Snapshot& b) {
    return {jaccard<NodeId>(a.nodes(), b.nodes()), jaccard<Edge>(a.edges(), b.edges())};
}

double CostReport::mean_mds_size() const {
    if (mds_sizes.empty()) {
        return 0.0;
    }
    return static_cast<double>(std::accumulate(mds_sizes.begin(), mds_sizes.end(), std::size_t{0})) /
           static_cast<double>(mds_sizes.size());
}

CostReport cost_report(const ControlScheme& scheme) {
    CostReport report;
    report.umds = umds(scheme);
    for (const auto& d : scheme.mds_sequence) {
        report.mds_sizes.push_back(d.size());
    }
    if (scheme.mds_sequence.size() >= 2) {
        auto churn = ecc(scheme);
        report.ecc_total = churn.total;
        report.ecc_series = std::move(churn.series);
    }
    return report;
}

}  // namespace dynctrl
