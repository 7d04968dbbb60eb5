#include "pace/pace_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <utility>

#include "format.hpp"
#include "pace/errors.hpp"

namespace pace {

using detail::num;

EdgeKind classify_edge(Layer from, Layer to) noexcept {
    if (from == to) return EdgeKind::Horizontal;
    return static_cast<int>(to) > static_cast<int>(from) ? EdgeKind::Downward : EdgeKind::Upward;
}

PaceGraph PaceGraph::build(std::vector<StateNode> states, const std::vector<EdgeSpec>& edges) {
    PaceGraph g;
    g.states_ = std::move(states);

    for (StateIndex i = 0; i < g.states_.size(); ++i) {
        const auto& s = g.states_[i];
        if (s.id.empty()) {
            throw ValidationError("state #" + std::to_string(i) + " has an empty id");
        }
        if (!g.by_id_.emplace(s.id, i).second) {
            throw ValidationError("duplicate state id '" + s.id + "'");
        }
    }

    struct Pending {
        TransitionEdge edge;
        const std::string* target_id;
    };
    std::vector<Pending> pending;
    pending.reserve(edges.size());
    std::set<std::pair<StateIndex, StateIndex>> seen;
    for (const auto& e : edges) {
        const std::string label = "transition " + e.from + " -> " + e.to;
        auto from = g.find(e.from);
        if (!from) throw ValidationError(label + ": unknown source state '" + e.from + "'");
        auto to = g.find(e.to);
        if (!to) throw ValidationError(label + ": unknown target state '" + e.to + "'");
        if (*from == *to) throw ValidationError(label + ": self-loops are not allowed");
        if (!(e.p >= 0.0 && e.p <= 1.0)) {
            throw ValidationError(label + ": probability " + num(e.p) + " outside [0, 1]");
        }
        if (!(e.cost >= 0.0) || !std::isfinite(e.cost)) {
            throw ValidationError(label + ": cost " + num(e.cost) + " must be finite and >= 0");
        }
        if (!seen.emplace(*from, *to).second) {
            throw ValidationError(label + ": duplicate transition");
        }
        TransitionEdge edge{*from, *to, e.p, e.cost,
                            classify_edge(g.states_[*from].layer, g.states_[*to].layer), 0};
        pending.push_back({edge, &g.states_[*to].id});
    }

    std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
        if (a.edge.from != b.edge.from) return a.edge.from < b.edge.from;
        return *a.target_id < *b.target_id;
    });

    g.edges_.reserve(pending.size());
    g.offsets_.assign(g.states_.size() + 1, 0);
    for (const auto& p : pending) {
        TransitionEdge e = p.edge;
        e.index = g.edges_.size();
        g.edges_.push_back(e);
        ++g.offsets_[e.from + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

    if (auto n = g.find(kNominalStateId)) g.nominal_ = *n;
    g.validate();
    return g;
}

void PaceGraph::validate() const {
    if (states_.empty()) throw ValidationError("graph has no states");

    auto nominal = find(kNominalStateId);
    if (!nominal) {
        throw ValidationError("graph is missing the reserved state '" +
                              std::string(kNominalStateId) + "'");
    }
    const auto& nom = states_[*nominal];
    if (nom.classification != StateClass::Nominal) {
        throw ValidationError("state '" + nom.id + "' must be classified nominal");
    }
    if (nom.layer != Layer::Primary) {
        throw ValidationError("state '" + nom.id + "' must lie in layer P");
    }

    bool has_failure = false;
    for (const auto& s : states_) {
        if (!(s.utility >= 0.0 && s.utility <= 1.0)) {
            throw ValidationError("state '" + s.id + "': utility " + num(s.utility) +
                                  " outside [0, 1]");
        }
        if (s.utility > nom.utility) {
            throw ValidationError("state '" + s.id + "' has utility " + num(s.utility) +
                                  " above the nominal state's " + num(nom.utility));
        }
        if (s.classification == StateClass::Failure) {
            has_failure = true;
            if (s.layer != Layer::Emergency) {
                throw ValidationError("failure state '" + s.id + "' must lie in layer E");
            }
        }
    }
    if (!has_failure) throw ValidationError("graph has no failure-classified state");

    for (const auto& e : edges_) {
        const auto& from = states_.at(e.from);
        const auto& to = states_.at(e.to);
        if (e.from == e.to) throw ValidationError("self-loop on '" + from.id + "'");
        if (e.kind != classify_edge(from.layer, to.layer)) {
            throw ValidationError("transition " + from.id + " -> " + to.id +
                                  " has an inconsistent kind");
        }
        if (!(e.p >= 0.0 && e.p <= 1.0) || !(e.cost >= 0.0)) {
            throw ValidationError("transition " + from.id + " -> " + to.id +
                                  " has out-of-range weights");
        }
    }

    for (StateIndex s = 0; s < states_.size(); ++s) {
        if (successors(s).empty() && states_[s].classification != StateClass::Failure) {
            throw ValidationError("state '" + states_[s].id +
                                  "' has no outgoing transitions but is not a failure state");
        }
    }
}

std::optional<StateIndex> PaceGraph::find(std::string_view id) const {
    auto it = by_id_.find(std::string(id));
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

StateIndex PaceGraph::index_of(std::string_view id) const {
    if (auto s = find(id)) return *s;
    throw LookupError("unknown state id '" + std::string(id) + "'");
}

std::span<const TransitionEdge> PaceGraph::successors(StateIndex s) const {
    if (s >= states_.size()) {
        throw LookupError("state index " + std::to_string(s) + " out of range");
    }
    return std::span<const TransitionEdge>(edges_).subspan(offsets_[s], offsets_[s + 1] - offsets_[s]);
}

std::span<const TransitionEdge> PaceGraph::successors(std::string_view id) const {
    return successors(index_of(id));
}

double MoveDistribution::total() const noexcept {
    return std::accumulate(move.begin(), move.end(), stay);
}

std::optional<std::size_t> MoveDistribution::sample(double u) const noexcept {
    double acc = stay;
    if (u < acc) return std::nullopt;
    std::optional<std::size_t> last_positive;
    for (std::size_t i = 0; i < move.size(); ++i) {
        if (move[i] <= 0.0) continue;
        acc += move[i];
        last_positive = i;
        if (u < acc) return i;
    }
    // Rounding left u just above the accumulated mass.
    return last_positive;
}

MoveDistribution normalized_move_distribution(std::span<const TransitionEdge> edges, double p_stay) {
    if (!(p_stay >= 0.0 && p_stay <= 1.0)) {
        throw ConfigError("p_stay " + num(p_stay) + " outside [0, 1]");
    }
    MoveDistribution d;
    if (edges.empty()) return d;

    d.stay = p_stay;
    d.move.resize(edges.size());
    const double move_mass = 1.0 - p_stay;
    double sum = 0.0;
    for (const auto& e : edges) sum += e.p;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        d.move[i] = sum > 0.0 ? move_mass * (edges[i].p / sum)
                              : move_mass / static_cast<double>(edges.size());
    }
    return d;
}

std::string_view to_string(Layer layer) {
    switch (layer) {
    case Layer::Primary: return "P";
    case Layer::Alternate: return "A";
    case Layer::Contingency: return "C";
    case Layer::Emergency: return "E";
    }
    return "P";
}

std::string_view to_string(StateClass c) {
    switch (c) {
    case StateClass::Nominal: return "nominal";
    case StateClass::Degraded: return "degraded";
    case StateClass::Failure: return "failure";
    }
    return "degraded";
}

std::string_view to_string(EdgeKind kind) {
    switch (kind) {
    case EdgeKind::Horizontal: return "horizontal";
    case EdgeKind::Downward: return "downward";
    case EdgeKind::Upward: return "upward";
    }
    return "horizontal";
}

Layer parse_layer(std::string_view text) {
    if (text == "P") return Layer::Primary;
    if (text == "A") return Layer::Alternate;
    if (text == "C") return Layer::Contingency;
    if (text == "E") return Layer::Emergency;
    throw ValidationError("unknown layer '" + std::string(text) + "' (expected P, A, C or E)");
}

StateClass parse_state_class(std::string_view text) {
    if (text == "nominal") return StateClass::Nominal;
    if (text == "degraded") return StateClass::Degraded;
    if (text == "failure") return StateClass::Failure;
    throw ValidationError("unknown classification '" + std::string(text) +
                          "' (expected nominal, degraded or failure)");
}

} // namespace pace
