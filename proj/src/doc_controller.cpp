#include "dynctrl/doc_controller.hpp"

#include <algorithm>
#include <stdexcept>

namespace dynctrl {

WindowLength WindowLength::of(std::uint32_t transitions) {
    if (transitions == 0) {
        throw std::invalid_argument("window length must be positive");
    }
    WindowLength w;
    w.value_ = transitions;
    return w;
}

WindowLength WindowLength::parse(const std::string& text) {
    if (text == "all" || text == "ALL") {
        return all();
    }
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("invalid window length '" + text + "'");
    }
    if (used != text.size() || v <= 0 || v > 1'000'000) {
        throw std::invalid_argument("invalid window length '" + text + "'");
    }
    return of(static_cast<std::uint32_t>(v));
}

std::string to_string(Algorithm a) { return a == Algorithm::doc ? "DOC" : "MM"; }

Algorithm parse_algorithm(const std::string& text) {
    if (text == "DOC" || text == "doc") {
        return Algorithm::doc;
    }
    if (text == "MM" || text == "mm") {
        return Algorithm::mm;
    }
    throw std::invalid_argument("unknown algorithm '" + text + "' (expected DOC or MM)");
}

double edge_similarity(NodeId v, const Snapshot& cur, const Snapshot& prev) {
    if (!prev.contains(v)) {
        return 0.0;
    }
    const auto now = incident_edges(cur, v);
    const auto before = incident_edges(prev, v);
    return jaccard<Edge>(now, before);
}

double degree_centrality(NodeId v, const Snapshot& s) {
    const std::size_t deg = degree(s, v);
    if (s.node_count() < 2) {
        return 0.0;
    }
    return static_cast<double>(deg) / static_cast<double>(s.node_count() - 1);
}

double importance(double sigma, bool in_prev_mds, std::uint32_t l) {
    if (l == 0) {
        throw std::invalid_argument("window length must be positive");
    }
    const double bound = 2.0 * l;
    if (!(sigma >= 0.0 && sigma <= bound)) {
        throw std::invalid_argument("stability " + std::to_string(sigma) + " outside [0, " +
                                    std::to_string(bound) + "]");
    }
    return (in_prev_mds ? bound : 0.0) + sigma;
}

std::uint32_t WeightState::effective_window() const {
    if (!window_.is_all()) {
        return window_.value();
    }
    const std::size_t transitions = history_.size() + (prev_snapshot_ ? 1 : 0);
    return static_cast<std::uint32_t>(std::max<std::size_t>(1, transitions));
}

std::vector<const TransitionTerms*> WeightState::retained_terms() const {
    std::size_t keep = history_.size();
    if (!window_.is_all()) {
        keep = std::min<std::size_t>(keep, window_.value() - 1);
    }
    std::vector<const TransitionTerms*> result;
    for (auto it = history_.rbegin(); it != history_.rend() && result.size() < keep; ++it) {
        result.push_back(&*it);
    }
    return result;
}

void WeightState::advance(const Snapshot& cur, std::optional<TransitionTerms> terms, Matching matching,
                          DriverSet mds) {
    if (terms) {
        history_.push_back(std::move(*terms));
        if (!window_.is_all()) {
            while (history_.size() > window_.value()) {
                history_.pop_front();
            }
        }
    }
    prev_snapshot_ = cur;
    prev_matching_ = std::move(matching);
    prev_mds_ = std::move(mds);
    ++processed_;
}

namespace {

StabilityTerm transition_term(NodeId v, const Snapshot& cur, const Snapshot& prev) {
    return {edge_similarity(v, cur, prev), degree_centrality(v, cur)};
}

double retained_sum(NodeId v, const std::vector<const TransitionTerms*>& retained) {
    double sum = 0.0;
    for (const TransitionTerms* t : retained) {
        if (auto it = t->terms.find(v); it != t->terms.end()) {
            sum += it->second.product();
        }
    }
    return sum;
}

}  // namespace

double stability(NodeId v, const WeightState& state, const Snapshot& cur) {
    cur.require_local(v);
    if (!state.prev_snapshot()) {
        return 0.0;
    }
    return transition_term(v, cur, *state.prev_snapshot()).product() + retained_sum(v, state.retained_terms());
}

std::vector<NodeId> search_order(std::vector<NodeImportance> importance) {
    std::sort(importance.begin(), importance.end(), [](const NodeImportance& a, const NodeImportance& b) {
        if (a.q != b.q) {
            return a.q < b.q;
        }
        if (a.in_prev_mds != b.in_prev_mds) {
            return !a.in_prev_mds;
        }
        return a.node < b.node;
    });
    std::vector<NodeId> order;
    order.reserve(importance.size());
    for (const auto& n : importance) {
        order.push_back(n.node);
    }
    return order;
}

StepResult DocController::step(const Snapshot& cur) {
    const auto& prev = state_.prev_snapshot();
    if (prev && cur.index() != prev->index() + 1) {
        throw std::invalid_argument("snapshot " + std::to_string(cur.index()) + " does not follow snapshot " +
                                    std::to_string(prev->index()));
    }

    StepResult result;
    result.window = state_.effective_window();
    const auto retained = state_.retained_terms();
    std::optional<TransitionTerms> terms;
    if (prev) {
        terms.emplace();
        terms->to_index = cur.index();
        terms->terms.reserve(cur.node_count());
    }

    result.importance.reserve(cur.node_count());
    for (NodeId v : cur.nodes()) {
        NodeImportance ni{v, 0.0, state_.prev_mds().contains(v), 0.0};
        if (terms) {
            const StabilityTerm term = transition_term(v, cur, *prev);
            terms->terms.emplace(v, term);
            ni.sigma = term.product() + retained_sum(v, retained);
        }
        ni.q = importance(ni.sigma, ni.in_prev_mds, result.window);
        result.importance.push_back(ni);
    }
    result.order = search_order(result.importance);

    const Matching seed = restrict_matching(state_.prev_matching(), cur);
    auto [matching, drivers] = ordered_augment(cur, seed, result.order);
    result.matching = matching;
    result.drivers = drivers;
    state_.advance(cur, std::move(terms), std::move(matching), std::move(drivers));
    return result;
}

ControlScheme run(const TemporalNetwork& net, WindowLength window, const StepObserver& observer) {
    if (net.empty()) {
        throw std::invalid_argument("cannot run on an empty temporal network");
    }
    ControlScheme scheme{Algorithm::doc, window, {}};
    scheme.mds_sequence.reserve(net.size());
    DocController controller(window);
    for (const Snapshot& s : net.snapshots()) {
        StepResult r = controller.step(s);
        if (observer) {
            observer(s, r);
        }
        scheme.mds_sequence.push_back(std::move(r.drivers));
    }
    return scheme;
}

ControlScheme run_baseline(const TemporalNetwork& net) {
    if (net.empty()) {
        throw std::invalid_argument("cannot run on an empty temporal network");
    }
    ControlScheme scheme{Algorithm::mm, WindowLength::of(1), {}};
    scheme.mds_sequence.reserve(net.size());
    for (const Snapshot& s : net.snapshots()) {
        scheme.mds_sequence.push_back(drivers_of(s, hopcroft_karp(s)));
    }
    return scheme;
}

}  // namespace dynctrl
