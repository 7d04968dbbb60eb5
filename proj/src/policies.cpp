#include "pace/policies.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "format.hpp"
#include "pace/errors.hpp"

namespace pace {

using detail::num;

void validate(const PolicyParams& params) {
    auto unit = [](double v, const char* field) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError(std::string(field) + " = " + num(v) + " outside [0, 1]");
        }
    };
    auto nonneg = [](double v, const char* field) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError(std::string(field) + " = " + num(v) + " must be finite and >= 0");
        }
    };
    unit(params.p_stay, "policy.p_stay");
    nonneg(params.lambda, "policy.lambda");
    nonneg(params.gamma, "policy.gamma");
    nonneg(params.alpha, "policy.alpha");
    unit(params.epsilon, "policy.epsilon");
}

AdaptedEdge adapt_edge(const TransitionEdge& edge, const EnvironmentState& env,
                       const PolicyParams& params) noexcept {
    AdaptedEdge out;
    out.p = edge.p * (1.0 + params.lambda * env.jamming);
    const double relief = params.alpha * static_cast<double>(env.concurrency - 1);
    out.cost = std::max(0.0, edge.cost + params.gamma * env.jamming - relief);
    return out;
}

MoveDistribution adaptive_distribution(std::span<const TransitionEdge> edges,
                                       const EnvironmentState& env, const PolicyParams& params) {
    MoveDistribution d;
    if (edges.empty()) return d;

    d.move.resize(edges.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const bool scaled = params.adaptive_scale_scope == ScaleScope::All ||
                            edges[i].kind == EdgeKind::Downward;
        const double p = scaled ? adapt_edge(edges[i], env, params).p : edges[i].p;
        d.move[i] = std::clamp(p, 0.0, 1.0);
        mass += d.move[i];
    }
    if (mass > 1.0) {
        for (auto& m : d.move) m /= mass;
        d.stay = 0.0;
    } else {
        d.stay = 1.0 - mass;
    }
    return d;
}

double greedy_reward(const TransitionEdge& edge, const EnvironmentState& env,
                     const PolicyParams& params, const PaceGraph& graph) noexcept {
    return graph.states()[edge.to].utility - adapt_edge(edge, env, params).cost;
}

Action decide_static(std::span<const TransitionEdge> edges, const PolicyParams& params, Rng& rng) {
    if (edges.empty()) return Stay{};
    const auto dist = normalized_move_distribution(edges, params.p_stay);
    const auto pick = dist.sample(rng.uniform01());
    if (!pick) return Stay{};
    return Move{edges[*pick], edges[*pick].cost};
}

Action decide_adaptive(std::span<const TransitionEdge> edges, const EnvironmentState& env,
                       const PolicyParams& params, Rng& rng) {
    if (edges.empty()) return Stay{};
    const auto dist = adaptive_distribution(edges, env, params);
    const auto pick = dist.sample(rng.uniform01());
    if (!pick) return Stay{};
    return Move{edges[*pick], adapt_edge(edges[*pick], env, params).cost};
}

Action decide_greedy(std::span<const TransitionEdge> edges, const EnvironmentState& env,
                     const PolicyParams& params, const PaceGraph& graph, Rng& rng) {
    if (edges.empty()) return Stay{};

    // Always consume the exploration draw so the stream layout does not
    // depend on the outcome.
    const double u = rng.uniform01();
    if (u < params.epsilon) {
        const auto& e = edges[rng.index(edges.size())];
        return Move{e, adapt_edge(e, env, params).cost};
    }

    std::size_t best = 0;
    double best_reward = greedy_reward(edges[0], env, params, graph);
    for (std::size_t i = 1; i < edges.size(); ++i) {
        const double r = greedy_reward(edges[i], env, params, graph);
        if (r > best_reward) {
            best = i;
            best_reward = r;
        }
    }
    const double stay_reward = graph.states()[edges[0].from].utility;
    if (best_reward < stay_reward) return Stay{};
    return Move{edges[best], adapt_edge(edges[best], env, params).cost};
}

Action decide(PolicyKind kind, std::span<const TransitionEdge> edges, const EnvironmentState& env,
              const PolicyParams& params, const PaceGraph& graph, Rng& rng) {
    switch (kind) {
    case PolicyKind::Static: return decide_static(edges, params, rng);
    case PolicyKind::Adaptive: return decide_adaptive(edges, env, params, rng);
    case PolicyKind::Greedy: return decide_greedy(edges, env, params, graph, rng);
    }
    return Stay{};
}

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::Static: return "static";
    case PolicyKind::Adaptive: return "adaptive";
    case PolicyKind::Greedy: return "greedy";
    }
    return "static";
}

PolicyKind parse_policy(std::string_view text) {
    if (text == "static") return PolicyKind::Static;
    if (text == "adaptive") return PolicyKind::Adaptive;
    if (text == "greedy") return PolicyKind::Greedy;
    throw LookupError("unknown policy '" + std::string(text) +
                      "' (expected static, adaptive or greedy)");
}

std::string_view to_string(ScaleScope scope) {
    return scope == ScaleScope::All ? "all" : "downward";
}

ScaleScope parse_scale_scope(std::string_view text) {
    if (text == "all") return ScaleScope::All;
    if (text == "downward") return ScaleScope::Downward;
    throw ValidationError("unknown adaptive_scale_scope '" + std::string(text) +
                          "' (expected all or downward)");
}

} // namespace pace
