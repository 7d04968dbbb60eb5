#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pace/pace_graph.hpp"
#include "pace/random.hpp"

namespace pace {

/// Context seen by the policies at one timestep.
struct EnvironmentState {
    int t = 0;
    double jamming = 0.0;   // J_t in [0, 1]
    double energy = 1.0;    // normalized reserve in [0, 1]
    int concurrency = 1;    // recovery actions available, C >= 1
    bool crisis_active = false;
};

/// A scheduled disruption active for timesteps [start_t, start_t + duration).
struct CrisisSpec {
    int start_t = 2;
    int duration = 3;
    double jamming_level = 0.9;
    std::vector<std::pair<std::string, std::string>> blocked_transitions;
    std::vector<std::string> suppressed_states;
    double cost_multiplier = 1.0;

    [[nodiscard]] bool active_at(int t) const noexcept {
        return t >= start_t && t < start_t + duration;
    }
};

struct EnvironmentSpec {
    double baseline_jamming = 0.2;
    double jamming_noise = 0.1;       // half-width of uniform noise on J_t
    double energy_drain_per_step = 0.02;
    double energy_cost_coupling = 0.005; // energy spent per unit of transition cost
    double concurrency_energy_threshold = 0.3; // C = 2 above this energy, else 1
    std::optional<CrisisSpec> crisis;

    [[nodiscard]] bool crisis_at(int t) const noexcept { return crisis && crisis->active_at(t); }
};

/// Range checks only. Throws ValidationError naming the field.
void validate(const EnvironmentSpec& spec);

/// Resolves the crisis against a graph: every referenced state and blocked
/// transition must exist, P_Nominal cannot be suppressed, and no layer may be
/// suppressed entirely.
void validate(const CrisisSpec& crisis, const PaceGraph& graph);

/// Crisis resolved to graph indices for fast per-step filtering.
class CrisisView {
  public:
    CrisisView() = default;
    CrisisView(const CrisisSpec& crisis, const PaceGraph& graph);

    [[nodiscard]] bool blocks(const TransitionEdge& e) const;
    [[nodiscard]] double cost_multiplier() const noexcept { return cost_multiplier_; }
    [[nodiscard]] bool empty() const noexcept { return !configured_; }

  private:
    bool configured_ = false;
    std::vector<bool> blocked_edge_;
    std::vector<bool> suppressed_state_;
    double cost_multiplier_ = 1.0;
};

EnvironmentState initial_environment(const EnvironmentSpec& spec);

int concurrency_for(double energy, const EnvironmentSpec& spec) noexcept;

/// Advances one timestep. The noise draw is skipped when jamming_noise is 0
/// or the crisis pins J_t, so deterministic specs consume no randomness.
EnvironmentState step_environment(const EnvironmentState& env, const EnvironmentSpec& spec,
                                  double last_step_cost, Rng& rng);

/// Successors of s as seen at env. During a crisis, blocked and suppressed
/// targets are removed and remaining costs are scaled by the multiplier.
std::vector<TransitionEdge> effective_transitions(const PaceGraph& g, StateIndex s,
                                                  const EnvironmentState& env,
                                                  const CrisisView& crisis);

} // namespace pace
