#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pace/pace_graph.hpp"
#include "pace/policies.hpp"

namespace pace {

/// Denominator floor for DREI while no transition cost has accrued.
inline constexpr double kCostFloor = 1e-9;

/// Realization of one Monte Carlo trial over horizon T.
struct TrialTrace {
    std::uint64_t trial_index = 0;
    std::vector<StateIndex> states;     // T + 1 entries, states[0] is the start
    std::vector<Action> actions;        // T entries
    std::vector<double> step_costs;     // T entries, 0 for STAY
    std::vector<double> step_utilities; // T + 1 entries, raw utility of states[t]

    [[nodiscard]] int horizon() const noexcept { return static_cast<int>(actions.size()); }
    [[nodiscard]] double total_cost() const noexcept;
};

/// Per-trial outcome kept alongside the ensemble for distribution plots.
struct TrialSummary {
    std::uint64_t trial_index = 0;
    StateIndex final_state = 0;
    StateClass final_class = StateClass::Nominal;
    double final_adjusted_utility = 0.0;
    double total_cost = 0.0;
    double drei = 0.0; // DREI_T with occupancy concentrated on the realized state

    friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

struct EnsembleStats {
    int horizon = 0;
    std::uint64_t n_trials = 0;
    bool exact = false; // produced by forward propagation rather than sampling

    std::vector<std::vector<double>> occupancy; // [t][state], P_t(s)
    std::vector<double> mean_utility;           // adjusted expected utility per t
    std::vector<double> mean_cumulative_cost;   // C_t averaged over trials
    std::vector<double> drei;                   // DREI_t
    std::vector<bool> drei_defined;             // false where raw C_t == 0
    std::array<std::uint64_t, kStateClassCount> final_counts{};
    std::array<double, kStateClassCount> final_fractions{};
    std::vector<TrialSummary> trials; // sorted by trial_index; empty when exact

    [[nodiscard]] double final_utility() const { return mean_utility.back(); }
    [[nodiscard]] double final_cost() const { return mean_cumulative_cost.back(); }
    [[nodiscard]] double final_drei() const { return drei.back(); }
    [[nodiscard]] double fraction(StateClass c) const {
        return final_fractions[static_cast<std::size_t>(c)];
    }

    friend bool operator==(const EnsembleStats&, const EnsembleStats&) = default;
};

/// omega(s) * kappa for P_Nominal at t > 0, omega(s) otherwise.
double adjusted_utility(const PaceGraph& graph, StateIndex s, int t, double kappa);
double adjusted_utility(const PaceGraph& graph, std::string_view id, int t, double kappa);

/// Expected adjusted utility divided by accumulated cost, with the cost
/// floored at kCostFloor. Shared by every reporting path.
double drei_ratio(double expected_utility, double cumulative_cost) noexcept;

/// DREI_t for an occupancy distribution over the graph's states.
double drei_at(std::span<const double> occupancy, double cumulative_cost, int t, double kappa,
               const PaceGraph& graph);

StateClass classify_final(const TrialTrace& trace, const PaceGraph& graph);

/// Mergeable partial aggregate. Counts are integers and floating sums are
/// deferred to finalize(), which orders trials by index, so any partition
/// and merge order yields bit-identical statistics.
class EnsembleAccumulator {
  public:
    EnsembleAccumulator(const PaceGraph& graph, int horizon, double kappa);

    void add(const TrialTrace& trace);
    void merge(EnsembleAccumulator&& other);
    [[nodiscard]] std::uint64_t count() const noexcept { return trials_.size(); }

    /// Throws ValidationError when no trial was added.
    [[nodiscard]] EnsembleStats finalize() const;

  private:
    struct Record {
        TrialSummary summary;
        std::vector<double> cumulative_cost; // T + 1 entries
    };

    const PaceGraph* graph_;
    int horizon_;
    double kappa_;
    std::vector<std::uint64_t> occupancy_counts_; // (T + 1) x |S|, row-major by t
    std::vector<Record> trials_;
};

/// Aggregates complete traces of equal horizon. Throws ValidationError on an
/// empty list or mismatched horizons.
EnsembleStats aggregate(std::span<const TrialTrace> traces, const PaceGraph& graph, double kappa);

} // namespace pace
