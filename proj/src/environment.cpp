#include "pace/environment.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "format.hpp"
#include "pace/errors.hpp"

namespace pace {

using detail::num;

namespace {

void require_unit(double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(std::string(field) + " = " + num(v) + " outside [0, 1]");
    }
}

void require_nonneg(double v, const char* field) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError(std::string(field) + " = " + num(v) + " must be finite and >= 0");
    }
}

} // namespace

void validate(const EnvironmentSpec& spec) {
    require_unit(spec.baseline_jamming, "environment.baseline_jamming");
    require_nonneg(spec.jamming_noise, "environment.jamming_noise");
    require_nonneg(spec.energy_drain_per_step, "environment.energy_drain_per_step");
    require_nonneg(spec.energy_cost_coupling, "environment.energy_cost_coupling");
    require_unit(spec.concurrency_energy_threshold, "environment.concurrency_energy_threshold");
    if (spec.crisis) {
        const auto& c = *spec.crisis;
        if (c.start_t < 0) {
            throw ValidationError("crisis.start_t = " + std::to_string(c.start_t) + " must be >= 0");
        }
        if (c.duration < 1) {
            throw ValidationError("crisis.duration = " + std::to_string(c.duration) + " must be >= 1");
        }
        require_unit(c.jamming_level, "crisis.jamming_level");
        if (!(c.cost_multiplier >= 1.0) || !std::isfinite(c.cost_multiplier)) {
            throw ValidationError("crisis.cost_multiplier = " + num(c.cost_multiplier) +
                                  " must be finite and >= 1");
        }
    }
}

void validate(const CrisisSpec& crisis, const PaceGraph& graph) {
    std::array<std::size_t, kLayerCount> layer_total{};
    std::array<std::size_t, kLayerCount> layer_suppressed{};
    for (const auto& s : graph.states()) ++layer_total[static_cast<std::size_t>(s.layer)];

    std::vector<bool> seen(graph.size(), false);
    for (const auto& id : crisis.suppressed_states) {
        auto s = graph.find(id);
        if (!s) throw LookupError("crisis.suppressed_states references unknown state '" + id + "'");
        if (*s == graph.nominal()) {
            throw ValidationError("crisis.suppressed_states may not include '" + id + "'");
        }
        if (seen[*s]) continue;
        seen[*s] = true;
        const auto layer = static_cast<std::size_t>(graph.state(*s).layer);
        if (++layer_suppressed[layer] == layer_total[layer]) {
            throw ValidationError("crisis.suppressed_states removes every state of layer " +
                                  std::string(to_string(graph.state(*s).layer)));
        }
    }

    for (const auto& [from, to] : crisis.blocked_transitions) {
        auto f = graph.find(from);
        if (!f) throw LookupError("crisis.blocked_transitions references unknown state '" + from + "'");
        auto t = graph.find(to);
        if (!t) throw LookupError("crisis.blocked_transitions references unknown state '" + to + "'");
        auto succ = graph.successors(*f);
        if (std::none_of(succ.begin(), succ.end(), [&](const auto& e) { return e.to == *t; })) {
            throw LookupError("crisis.blocked_transitions references missing transition " + from +
                              " -> " + to);
        }
    }
}

CrisisView::CrisisView(const CrisisSpec& crisis, const PaceGraph& graph)
    : configured_(true),
      blocked_edge_(graph.edges().size(), false),
      suppressed_state_(graph.size(), false),
      cost_multiplier_(crisis.cost_multiplier) {
    validate(crisis, graph);
    for (const auto& id : crisis.suppressed_states) suppressed_state_[graph.index_of(id)] = true;
    for (const auto& [from, to] : crisis.blocked_transitions) {
        const auto f = graph.index_of(from);
        const auto t = graph.index_of(to);
        for (const auto& e : graph.successors(f)) {
            if (e.to == t) blocked_edge_[e.index] = true;
        }
    }
}

bool CrisisView::blocks(const TransitionEdge& e) const {
    if (!configured_) return false;
    return blocked_edge_.at(e.index) || suppressed_state_.at(e.to);
}

int concurrency_for(double energy, const EnvironmentSpec& spec) noexcept {
    return energy > spec.concurrency_energy_threshold ? 2 : 1;
}

EnvironmentState initial_environment(const EnvironmentSpec& spec) {
    EnvironmentState env;
    env.t = 0;
    env.crisis_active = spec.crisis_at(0);
    env.jamming = env.crisis_active ? spec.crisis->jamming_level : spec.baseline_jamming;
    env.energy = 1.0;
    env.concurrency = concurrency_for(env.energy, spec);
    return env;
}

EnvironmentState step_environment(const EnvironmentState& env, const EnvironmentSpec& spec,
                                  double last_step_cost, Rng& rng) {
    EnvironmentState next;
    next.t = env.t + 1;
    next.crisis_active = spec.crisis_at(next.t);
    if (next.crisis_active) {
        next.jamming = spec.crisis->jamming_level;
    } else {
        double j = spec.baseline_jamming;
        if (spec.jamming_noise > 0.0) j += rng.uniform(-spec.jamming_noise, spec.jamming_noise);
        next.jamming = std::clamp(j, 0.0, 1.0);
    }
    const double spent = spec.energy_drain_per_step + spec.energy_cost_coupling * last_step_cost;
    next.energy = std::clamp(env.energy - spent, 0.0, 1.0);
    next.concurrency = concurrency_for(next.energy, spec);
    return next;
}

std::vector<TransitionEdge> effective_transitions(const PaceGraph& g, StateIndex s,
                                                  const EnvironmentState& env,
                                                  const CrisisView& crisis) {
    auto succ = g.successors(s);
    if (!env.crisis_active || crisis.empty()) return {succ.begin(), succ.end()};

    std::vector<TransitionEdge> out;
    out.reserve(succ.size());
    for (const auto& e : succ) {
        if (crisis.blocks(e)) continue;
        TransitionEdge scaled = e;
        scaled.cost *= crisis.cost_multiplier();
        out.push_back(scaled);
    }
    return out;
}

} // namespace pace
