#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pace {

/// PACE layers in order of decreasing operational viability.
enum class Layer : std::uint8_t { Primary = 0, Alternate = 1, Contingency = 2, Emergency = 3 };

inline constexpr std::size_t kLayerCount = 4;

enum class StateClass : std::uint8_t { Nominal = 0, Degraded = 1, Failure = 2 };

inline constexpr std::size_t kStateClassCount = 3;

enum class EdgeKind : std::uint8_t { Horizontal, Downward, Upward };

/// Reserved id of the fully operational state.
inline constexpr std::string_view kNominalStateId = "P_Nominal";

using StateIndex = std::size_t;

struct StateNode {
    std::string id;
    Layer layer = Layer::Primary;
    double utility = 0.0;
    StateClass classification = StateClass::Degraded;
};

/// Transition as supplied by a caller, addressed by state id.
struct EdgeSpec {
    std::string from;
    std::string to;
    double p = 0.0;
    double cost = 0.0;
};

/// Validated transition inside a PaceGraph, addressed by state index.
struct TransitionEdge {
    StateIndex from = 0;
    StateIndex to = 0;
    double p = 0.0;
    double cost = 0.0;
    EdgeKind kind = EdgeKind::Horizontal;
    std::size_t index = 0; // position in PaceGraph::edges()

    friend bool operator==(const TransitionEdge&, const TransitionEdge&) = default;
};

EdgeKind classify_edge(Layer from, Layer to) noexcept;

/// Directed multi-layer state graph. Immutable once built and safe to share
/// between threads.
class PaceGraph {
  public:
    /// Empty placeholder; only build() produces a usable graph.
    PaceGraph() = default;

    /// Validates and indexes the graph. Every violation raises a
    /// ValidationError naming the offending state or edge.
    static PaceGraph build(std::vector<StateNode> states, const std::vector<EdgeSpec>& edges);

    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] const std::vector<StateNode>& states() const noexcept { return states_; }
    [[nodiscard]] const StateNode& state(StateIndex s) const { return states_.at(s); }
    [[nodiscard]] const std::vector<TransitionEdge>& edges() const noexcept { return edges_; }

    [[nodiscard]] std::optional<StateIndex> find(std::string_view id) const;
    /// Throws LookupError for unknown ids.
    [[nodiscard]] StateIndex index_of(std::string_view id) const;

    [[nodiscard]] StateIndex nominal() const noexcept { return nominal_; }
    [[nodiscard]] double utility(StateIndex s) const { return states_.at(s).utility; }
    [[nodiscard]] StateClass classification(StateIndex s) const { return states_.at(s).classification; }
    [[nodiscard]] const std::string& id(StateIndex s) const { return states_.at(s).id; }

    /// Outgoing edges of s, sorted by target id.
    [[nodiscard]] std::span<const TransitionEdge> successors(StateIndex s) const;
    [[nodiscard]] std::span<const TransitionEdge> successors(std::string_view id) const;

    /// Re-checks every structural invariant; throws ValidationError on failure.
    void validate() const;

  private:
    std::vector<StateNode> states_;
    std::vector<TransitionEdge> edges_; // grouped by source, then sorted by target id
    std::vector<std::size_t> offsets_;  // successors of s are edges_[offsets_[s], offsets_[s+1])
    std::unordered_map<std::string, StateIndex> by_id_;
    StateIndex nominal_ = 0;
};

/// Probability of each outcome of one step: STAY or one of the supplied
/// edges. `move[i]` belongs to `edges[i]` of the call that produced it.
struct MoveDistribution {
    double stay = 1.0;
    std::vector<double> move;

    [[nodiscard]] double total() const noexcept;
    /// Inverse-CDF sample given u in [0, 1). Returns the chosen edge position,
    /// or nullopt for STAY.
    [[nodiscard]] std::optional<std::size_t> sample(double u) const noexcept;
};

/// STAY with probability p_stay, the rest split over the edges in proportion
/// to their base probabilities. An edge set whose probabilities are all zero
/// splits the move mass uniformly; an empty edge set always stays.
MoveDistribution normalized_move_distribution(std::span<const TransitionEdge> edges, double p_stay);

std::string_view to_string(Layer layer);
std::string_view to_string(StateClass c);
std::string_view to_string(EdgeKind kind);
Layer parse_layer(std::string_view text);
StateClass parse_state_class(std::string_view text);

} // namespace pace
