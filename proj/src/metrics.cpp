#include "pace/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "format.hpp"
#include "pace/errors.hpp"

namespace pace {

double TrialTrace::total_cost() const noexcept {
    return std::accumulate(step_costs.begin(), step_costs.end(), 0.0);
}

double adjusted_utility(const PaceGraph& graph, StateIndex s, int t, double kappa) {
    if (!(kappa > 1.0)) throw ConfigError("kappa " + detail::num(kappa) + " must exceed 1");
    const double w = graph.state(s).utility;
    return (s == graph.nominal() && t > 0) ? w * kappa : w;
}

double adjusted_utility(const PaceGraph& graph, std::string_view id, int t, double kappa) {
    return adjusted_utility(graph, graph.index_of(id), t, kappa);
}

double drei_ratio(double expected_utility, double cumulative_cost) noexcept {
    return expected_utility / std::max(cumulative_cost, kCostFloor);
}

double drei_at(std::span<const double> occupancy, double cumulative_cost, int t, double kappa,
               const PaceGraph& graph) {
    if (occupancy.size() != graph.size()) {
        throw ValidationError("occupancy has " + std::to_string(occupancy.size()) +
                              " entries for a graph of " + std::to_string(graph.size()) + " states");
    }
    double expected = 0.0;
    for (StateIndex s = 0; s < occupancy.size(); ++s) {
        if (occupancy[s] != 0.0) expected += adjusted_utility(graph, s, t, kappa) * occupancy[s];
    }
    return drei_ratio(expected, cumulative_cost);
}

StateClass classify_final(const TrialTrace& trace, const PaceGraph& graph) {
    if (trace.states.empty()) throw ValidationError("trace has no states");
    return graph.classification(trace.states.back());
}

EnsembleAccumulator::EnsembleAccumulator(const PaceGraph& graph, int horizon, double kappa)
    : graph_(&graph), horizon_(horizon), kappa_(kappa) {
    if (horizon < 0) throw ValidationError("horizon must be >= 0");
    if (!(kappa > 1.0)) throw ConfigError("kappa " + detail::num(kappa) + " must exceed 1");
    occupancy_counts_.assign(static_cast<std::size_t>(horizon + 1) * graph.size(), 0);
}

void EnsembleAccumulator::add(const TrialTrace& trace) {
    const auto steps = static_cast<std::size_t>(horizon_);
    if (trace.actions.size() != steps || trace.step_costs.size() != steps ||
        trace.states.size() != steps + 1) {
        throw ValidationError("trace " + std::to_string(trace.trial_index) + " has horizon " +
                              std::to_string(trace.actions.size()) + ", expected " +
                              std::to_string(horizon_));
    }
    const std::size_t n = graph_->size();
    Record rec;
    rec.cumulative_cost.resize(steps + 1);
    double running = 0.0;
    for (std::size_t t = 0; t <= steps; ++t) {
        const StateIndex s = trace.states[t];
        if (s >= n) throw ValidationError("trace references state index out of range");
        ++occupancy_counts_[t * n + s];
        if (t > 0) running += trace.step_costs[t - 1];
        rec.cumulative_cost[t] = running;
    }
    auto& sum = rec.summary;
    sum.trial_index = trace.trial_index;
    sum.final_state = trace.states.back();
    sum.final_class = graph_->classification(sum.final_state);
    sum.final_adjusted_utility = adjusted_utility(*graph_, sum.final_state, horizon_, kappa_);
    sum.total_cost = running;
    sum.drei = drei_ratio(sum.final_adjusted_utility, running);
    trials_.push_back(std::move(rec));
}

void EnsembleAccumulator::merge(EnsembleAccumulator&& other) {
    if (other.graph_ != graph_ || other.horizon_ != horizon_ || other.kappa_ != kappa_) {
        throw ValidationError("cannot merge accumulators built for different runs");
    }
    for (std::size_t i = 0; i < occupancy_counts_.size(); ++i) {
        occupancy_counts_[i] += other.occupancy_counts_[i];
    }
    trials_.insert(trials_.end(), std::make_move_iterator(other.trials_.begin()),
                   std::make_move_iterator(other.trials_.end()));
    other.trials_.clear();
}

EnsembleStats EnsembleAccumulator::finalize() const {
    if (trials_.empty()) throw ValidationError("cannot aggregate an empty set of trials");

    std::vector<const Record*> ordered;
    ordered.reserve(trials_.size());
    for (const auto& r : trials_) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(), [](const Record* a, const Record* b) {
        return a->summary.trial_index < b->summary.trial_index;
    });

    const std::size_t n_states = graph_->size();
    const auto steps = static_cast<std::size_t>(horizon_);
    const double n = static_cast<double>(trials_.size());

    EnsembleStats st;
    st.horizon = horizon_;
    st.n_trials = trials_.size();
    st.occupancy.assign(steps + 1, std::vector<double>(n_states, 0.0));
    st.mean_utility.assign(steps + 1, 0.0);
    st.mean_cumulative_cost.assign(steps + 1, 0.0);
    st.drei.assign(steps + 1, 0.0);
    st.drei_defined.assign(steps + 1, false);

    for (std::size_t t = 0; t <= steps; ++t) {
        for (StateIndex s = 0; s < n_states; ++s) {
            st.occupancy[t][s] = static_cast<double>(occupancy_counts_[t * n_states + s]) / n;
        }
        double cost_sum = 0.0;
        for (const auto* r : ordered) cost_sum += r->cumulative_cost[t];
        st.mean_cumulative_cost[t] = cost_sum / n;

        double u = 0.0;
        for (StateIndex s = 0; s < n_states; ++s) {
            if (st.occupancy[t][s] != 0.0) {
                u += adjusted_utility(*graph_, s, static_cast<int>(t), kappa_) * st.occupancy[t][s];
            }
        }
        st.mean_utility[t] = u;
        st.drei[t] = drei_ratio(u, st.mean_cumulative_cost[t]);
        st.drei_defined[t] = cost_sum > 0.0;
    }

    st.trials.reserve(ordered.size());
    for (const auto* r : ordered) {
        ++st.final_counts[static_cast<std::size_t>(r->summary.final_class)];
        st.trials.push_back(r->summary);
    }
    for (std::size_t c = 0; c < kStateClassCount; ++c) {
        st.final_fractions[c] = static_cast<double>(st.final_counts[c]) / n;
    }
    return st;
}

EnsembleStats aggregate(std::span<const TrialTrace> traces, const PaceGraph& graph, double kappa) {
    if (traces.empty()) throw ValidationError("cannot aggregate an empty set of trials");
    EnsembleAccumulator acc(graph, traces.front().horizon(), kappa);
    for (const auto& tr : traces) acc.add(tr);
    return acc.finalize();
}

} // namespace pace
