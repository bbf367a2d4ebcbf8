#include "doctest.h"

#include <algorithm>
#include <iterator>
#include <random>

#include "dynctrl/metrics.hpp"
#include "oracles.hpp"

using namespace dynctrl;

namespace {

Edge E(std::uint32_t u, std::uint32_t v) { return {NodeId{u}, NodeId{v}}; }

std::vector<DriverSet> sets(std::initializer_list<std::initializer_list<std::uint32_t>> values) {
    std::vector<DriverSet> out;
    std::size_t index = 1;
    for (const auto& set : values) {
        DriverSet d{index++, {}};
        for (auto v : set) {
            d.drivers.push_back(NodeId{v});
        }
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

TEST_CASE("churn-heavy scheme") {
    const auto seq = sets({{1, 2}, {3, 4}, {1, 5, 6}, {2, 7, 8}, {3, 7, 8}});
    CHECK(umds(seq) == 8);
    const EccResult r = ecc(seq);
    CHECK(r.total == 9);
    CHECK(r.series == std::vector<std::size_t>{2, 3, 3, 1});
}

TEST_CASE("churn-light scheme") {
    const auto seq = sets({{1, 2}, {1, 2}, {1, 2, 3}, {1, 2, 3}, {1, 2, 4}});
    CHECK(umds(seq) == 4);
    CHECK(ecc(seq).total == 2);
    CHECK(ecc(seq).series == std::vector<std::size_t>{0, 1, 0, 1});
}

TEST_CASE("ecc needs two snapshots") {
    CHECK_THROWS_AS(ecc(sets({{1}})), std::invalid_argument);
    CHECK_THROWS_AS(ecc(sets({})), std::invalid_argument);
    CHECK(umds(sets({})) == 0);
}

TEST_CASE("with equal-sized driver sets, ecc is zero exactly when the sets never change") {
    std::mt19937_64 rng(3);
    std::vector<NodeId> pool{NodeId{0}, NodeId{1}, NodeId{2}, NodeId{3}};
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<DriverSet> seq;
        for (std::size_t i = 1; i <= 4; ++i) {
            DriverSet d{i, {}};
            std::sample(pool.begin(), pool.end(), std::back_inserter(d.drivers), 2, rng);
            if (i > 1 && rng() % 3 != 0) {
                d.drivers = seq.back().drivers;
            }
            seq.push_back(std::move(d));
        }
        bool same = true;
        for (std::size_t i = 1; i < seq.size(); ++i) {
            same = same && seq[i].drivers == seq[i - 1].drivers;
        }
        CHECK((ecc(seq).total == 0) == same);
        CHECK(umds(seq) >= 2);
    }
}

TEST_CASE("snapshot similarity examples") {
    const Snapshot a(1, {E(1, 2), E(2, 3)});
    const Snapshot b(2, {E(1, 2), E(3, 4)});
    const SimilarityPair s = snapshot_similarity(a, b);
    CHECK(s.nodes == doctest::Approx(3.0 / 4.0));
    CHECK(s.edges == doctest::Approx(1.0 / 3.0));
    const SimilarityPair self = snapshot_similarity(a, a);
    CHECK(self.nodes == 1.0);
    CHECK(self.edges == 1.0);
}

TEST_CASE("snapshot similarity is symmetric and bounded") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const Snapshot a = oracle::random_digraph(6, 0.3, rng);
        const Snapshot b = oracle::random_digraph(5, 0.3, rng);
        const SimilarityPair ab = snapshot_similarity(a, b);
        const SimilarityPair ba = snapshot_similarity(b, a);
        CHECK(ab.nodes == ba.nodes);
        CHECK(ab.edges == ba.edges);
        CHECK(ab.nodes >= 0.0);
        CHECK(ab.nodes <= 1.0);
        CHECK(ab.edges >= 0.0);
        CHECK(ab.edges <= 1.0);
    }
}

TEST_CASE("cost report") {
    ControlScheme scheme;
    scheme.mds_sequence = sets({{1, 2}, {3, 4}, {1, 5, 6}});
    const CostReport r = cost_report(scheme);
    CHECK(r.umds == 6);
    CHECK(r.ecc_total == 5);
    CHECK(r.mds_sizes == std::vector<std::size_t>{2, 2, 3});
    CHECK(r.mean_mds_size() == doctest::Approx(7.0 / 3.0));

    ControlScheme single;
    single.mds_sequence = sets({{1}});
    CHECK(cost_report(single).ecc_total == 0);
    CHECK(cost_report(single).ecc_series.empty());
}
