#pragma once

#include <span>
#include <string_view>
#include <variant>

#include "pace/environment.hpp"
#include "pace/pace_graph.hpp"
#include "pace/random.hpp"

namespace pace {

enum class PolicyKind { Static, Adaptive, Greedy };

inline constexpr PolicyKind kAllPolicies[] = {PolicyKind::Static, PolicyKind::Adaptive,
                                              PolicyKind::Greedy};

/// Which edges the adaptive model rescales with jamming.
enum class ScaleScope { All, Downward };

struct PolicyParams {
    double p_stay = 0.55;
    double lambda = 0.5;  // jamming -> probability sensitivity
    double gamma = 0.25;  // jamming -> cost sensitivity
    double alpha = 0.1;   // cost relief per extra concurrent recovery
    double epsilon = 0.1; // exploration rate
    ScaleScope adaptive_scale_scope = ScaleScope::All;
};

/// Range checks; throws ValidationError naming the `policy.*` field.
void validate(const PolicyParams& params);

struct Stay {
    friend bool operator==(const Stay&, const Stay&) = default;
};

struct Move {
    TransitionEdge edge;
    double effective_cost = 0.0; // cost actually charged for this step

    friend bool operator==(const Move&, const Move&) = default;
};

using Action = std::variant<Stay, Move>;

inline bool is_stay(const Action& a) noexcept { return std::holds_alternative<Stay>(a); }
inline double charged_cost(const Action& a) noexcept {
    const auto* m = std::get_if<Move>(&a);
    return m ? m->effective_cost : 0.0;
}

struct AdaptedEdge {
    double p = 0.0; // before clipping
    double cost = 0.0;
};

/// p_t = p (1 + lambda J_t); c_t = max(0, c + gamma J_t - alpha (C - 1)).
AdaptedEdge adapt_edge(const TransitionEdge& edge, const EnvironmentState& env,
                       const PolicyParams& params) noexcept;

/// Step distribution of the adaptive model. Scaled probabilities are clipped
/// to [0, 1]; STAY takes the residual 1 - sum, or 0 with the moves
/// renormalized when the sum exceeds 1.
MoveDistribution adaptive_distribution(std::span<const TransitionEdge> edges,
                                       const EnvironmentState& env, const PolicyParams& params);

/// One-step reward of taking `edge`: utility of the target minus adapted cost.
double greedy_reward(const TransitionEdge& edge, const EnvironmentState& env,
                     const PolicyParams& params, const PaceGraph& graph) noexcept;

Action decide_static(std::span<const TransitionEdge> edges, const PolicyParams& params, Rng& rng);

Action decide_adaptive(std::span<const TransitionEdge> edges, const EnvironmentState& env,
                       const PolicyParams& params, Rng& rng);

/// Epsilon-greedy over the valid successors. Exploitation also weighs
/// staying put (reward = utility of the current state) and only stays when
/// every move is strictly worse. Ties go to the lexicographically smallest
/// target id, which is the first in successor order.
Action decide_greedy(std::span<const TransitionEdge> edges, const EnvironmentState& env,
                     const PolicyParams& params, const PaceGraph& graph, Rng& rng);

Action decide(PolicyKind kind, std::span<const TransitionEdge> edges, const EnvironmentState& env,
              const PolicyParams& params, const PaceGraph& graph, Rng& rng);

std::string_view to_string(PolicyKind kind);
PolicyKind parse_policy(std::string_view text);
std::string_view to_string(ScaleScope scope);
ScaleScope parse_scale_scope(std::string_view text);

} // namespace pace
