#pragma once

// Independent forward propagation for the static policy, written directly
// from the model definition and sharing no code with the library's oracle
// or policy implementations. Works on state ids so it also cross-checks
// the library's indexing and crisis filtering.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pace/montecarlo.hpp"

namespace pace::testing {

struct ExactSeries {
    std::vector<std::map<std::string, double>> occupancy; // [t][state id]
    std::vector<double> expected_cost;                    // cumulative, per t
};

inline ExactSeries propagate_static_by_hand(const Scenario& sc, int horizon) {
    const auto& g = sc.graph;
    const auto& env = sc.environment;

    struct Out {
        std::string to;
        double p;
        double cost;
    };
    std::map<std::string, std::vector<Out>> out;
    for (const auto& s : g.states()) out[s.id];
    for (const auto& e : g.edges()) out[g.id(e.from)].push_back({g.id(e.to), e.p, e.cost});

    auto blocked = [&](const std::string& from, const std::string& to) {
        const auto& c = *env.crisis;
        for (const auto& [f, t] : c.blocked_transitions) {
            if (f == from && t == to) return true;
        }
        return std::find(c.suppressed_states.begin(), c.suppressed_states.end(), to) !=
               c.suppressed_states.end();
    };

    ExactSeries r;
    std::map<std::string, double> cur;
    for (const auto& s : g.states()) cur[s.id] = 0.0;
    cur[std::string(kNominalStateId)] = 1.0;
    r.occupancy.push_back(cur);
    r.expected_cost.push_back(0.0);

    for (int t = 1; t <= horizon; ++t) {
        const bool crisis = env.crisis && t >= env.crisis->start_t &&
                            t < env.crisis->start_t + env.crisis->duration;
        std::map<std::string, double> next;
        for (const auto& s : g.states()) next[s.id] = 0.0;
        double step_cost = 0.0;
        for (const auto& [id, mass] : cur) {
            if (mass == 0.0) continue;
            std::vector<Out> valid;
            for (const auto& o : out[id]) {
                if (crisis && blocked(id, o.to)) continue;
                valid.push_back({o.to, o.p, crisis ? o.cost * env.crisis->cost_multiplier : o.cost});
            }
            if (valid.empty()) {
                next[id] += mass;
                continue;
            }
            const double p_stay = sc.policy.p_stay;
            double sum = 0.0;
            for (const auto& o : valid) sum += o.p;
            next[id] += mass * p_stay;
            for (const auto& o : valid) {
                const double share = sum > 0.0 ? o.p / sum : 1.0 / static_cast<double>(valid.size());
                const double q = mass * (1.0 - p_stay) * share;
                next[o.to] += q;
                step_cost += q * o.cost;
            }
        }
        cur = std::move(next);
        r.occupancy.push_back(cur);
        r.expected_cost.push_back(r.expected_cost.back() + step_cost);
    }
    return r;
}

} // namespace pace::testing
