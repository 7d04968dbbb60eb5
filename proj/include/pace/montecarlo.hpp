#pragma once

#include <cstdint>

#include "pace/environment.hpp"
#include "pace/metrics.hpp"
#include "pace/pace_graph.hpp"
#include "pace/policies.hpp"

namespace pace {

inline constexpr std::uint64_t kDefaultTrials = 5000;
inline constexpr int kDefaultHorizon = 12;
inline constexpr double kDefaultKappa = 1.2;

/// Everything a simulation needs, independent of how it was loaded.
struct Scenario {
    PaceGraph graph;
    EnvironmentSpec environment;
    PolicyParams policy;
    double kappa = kDefaultKappa;
};

struct RunSpec {
    Scenario scenario;
    PolicyKind policy = PolicyKind::Greedy;
    std::uint64_t n_trials = kDefaultTrials;
    int horizon = kDefaultHorizon;
    std::uint64_t master_seed = 42;
    bool terminate_on_failure = false; // hold failed trials in place without stepping
    unsigned workers = 0;              // 0 = hardware concurrency; never affects results
};

/// Checks the scenario and run parameters; throws ValidationError.
void validate(const RunSpec& spec);

/// Simulates trial `trial_index`. Its random streams are derived from
/// (master_seed, trial_index) only.
TrialTrace run_trial(const RunSpec& spec, std::uint64_t trial_index);

/// Runs n_trials trials, in parallel when workers != 1. Output is
/// bit-identical for any worker count.
EnsembleStats run_ensemble(const RunSpec& spec);

/// Exact occupancy and expected cost by forward propagation. Supports the
/// static policy and the greedy policy with epsilon = 0, both with a
/// noiseless environment; anything else raises UnsupportedConfigError.
EnsembleStats oracle_exact(const RunSpec& spec);

} // namespace pace
