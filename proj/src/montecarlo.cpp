#include "pace/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "format.hpp"
#include "pace/errors.hpp"
#include "pace/random.hpp"

namespace pace {

namespace {

// Trials per work unit. Fixed so partitioning never depends on worker count.
constexpr std::uint64_t kBlockSize = 256;

class TrialRunner {
  public:
    explicit TrialRunner(const RunSpec& spec) : spec_(spec) {
        if (spec.scenario.environment.crisis) {
            crisis_ = CrisisView(*spec.scenario.environment.crisis, spec.scenario.graph);
        }
    }

    TrialTrace run(std::uint64_t trial_index) const {
        const auto& sc = spec_.scenario;
        const auto& g = sc.graph;
        Rng env_rng(derive_seed(spec_.master_seed, trial_index, kEnvironmentStream));
        Rng policy_rng(derive_seed(spec_.master_seed, trial_index, kPolicyStream));

        const auto steps = static_cast<std::size_t>(spec_.horizon);
        TrialTrace tr;
        tr.trial_index = trial_index;
        tr.states.reserve(steps + 1);
        tr.actions.reserve(steps);
        tr.step_costs.reserve(steps);
        tr.step_utilities.reserve(steps + 1);

        StateIndex s = g.nominal();
        EnvironmentState env = initial_environment(sc.environment);
        double last_cost = 0.0;
        tr.states.push_back(s);
        tr.step_utilities.push_back(g.utility(s));

        for (std::size_t t = 0; t < steps; ++t) {
            Action action = Stay{};
            if (!(spec_.terminate_on_failure && g.classification(s) == StateClass::Failure)) {
                env = step_environment(env, sc.environment, last_cost, env_rng);
                const auto edges = effective_transitions(g, s, env, crisis_);
                action = decide(spec_.policy, edges, env, sc.policy, g, policy_rng);
            }
            last_cost = charged_cost(action);
            if (const auto* m = std::get_if<Move>(&action)) s = m->edge.to;
            tr.actions.push_back(action);
            tr.step_costs.push_back(last_cost);
            tr.states.push_back(s);
            tr.step_utilities.push_back(g.utility(s));
        }
        return tr;
    }

    const CrisisView& crisis() const noexcept { return crisis_; }

  private:
    const RunSpec& spec_;
    CrisisView crisis_;
};

unsigned resolve_workers(unsigned requested, std::uint64_t blocks) {
    unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::uint64_t>(w, std::max<std::uint64_t>(blocks, 1)));
}

EnsembleStats propagate_static(const RunSpec& spec, const CrisisView& crisis) {
    const auto& sc = spec.scenario;
    const auto& g = sc.graph;
    const std::size_t n = g.size();
    const auto steps = static_cast<std::size_t>(spec.horizon);

    EnsembleStats st;
    st.horizon = spec.horizon;
    st.exact = true;
    st.occupancy.assign(steps + 1, std::vector<double>(n, 0.0));
    st.mean_cumulative_cost.assign(steps + 1, 0.0);
    st.occupancy[0][g.nominal()] = 1.0;

    for (std::size_t t = 0; t < steps; ++t) {
        // Only the crisis window matters to the static policy.
        EnvironmentState env;
        env.t = static_cast<int>(t + 1);
        env.crisis_active = sc.environment.crisis_at(env.t);

        const auto& cur = st.occupancy[t];
        auto& next = st.occupancy[t + 1];
        double cost = 0.0;
        for (StateIndex s = 0; s < n; ++s) {
            const double mass = cur[s];
            if (mass == 0.0) continue;
            if (spec.terminate_on_failure && g.classification(s) == StateClass::Failure) {
                next[s] += mass;
                continue;
            }
            const auto edges = effective_transitions(g, s, env, crisis);
            const auto dist = normalized_move_distribution(edges, sc.policy.p_stay);
            next[s] += mass * dist.stay;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                next[edges[i].to] += mass * dist.move[i];
                cost += mass * dist.move[i] * edges[i].cost;
            }
        }
        st.mean_cumulative_cost[t + 1] = st.mean_cumulative_cost[t] + cost;
    }
    return st;
}

void finish_exact(EnsembleStats& st, const RunSpec& spec) {
    const auto& g = spec.scenario.graph;
    const auto steps = static_cast<std::size_t>(spec.horizon);
    st.mean_utility.assign(steps + 1, 0.0);
    st.drei.assign(steps + 1, 0.0);
    st.drei_defined.assign(steps + 1, false);
    for (std::size_t t = 0; t <= steps; ++t) {
        double u = 0.0;
        for (StateIndex s = 0; s < g.size(); ++s) {
            if (st.occupancy[t][s] != 0.0) {
                u += adjusted_utility(g, s, static_cast<int>(t), spec.scenario.kappa) *
                     st.occupancy[t][s];
            }
        }
        st.mean_utility[t] = u;
        st.drei[t] = drei_ratio(u, st.mean_cumulative_cost[t]);
        st.drei_defined[t] = st.mean_cumulative_cost[t] > 0.0;
    }
    st.final_fractions = {};
    for (StateIndex s = 0; s < g.size(); ++s) {
        st.final_fractions[static_cast<std::size_t>(g.classification(s))] += st.occupancy[steps][s];
    }
    st.final_counts = {};
    st.n_trials = 0;
    st.trials.clear();
    st.exact = true;
}

} // namespace

void validate(const RunSpec& spec) {
    const auto& sc = spec.scenario;
    sc.graph.validate();
    validate(sc.environment);
    if (sc.environment.crisis) validate(*sc.environment.crisis, sc.graph);
    validate(sc.policy);
    if (!(sc.kappa > 1.0)) throw ValidationError("kappa = " + detail::num(sc.kappa) + " must exceed 1");
    if (spec.n_trials < 1) throw ValidationError("n_trials must be >= 1");
    if (spec.horizon < 0) throw ValidationError("horizon must be >= 0");
}

TrialTrace run_trial(const RunSpec& spec, std::uint64_t trial_index) {
    validate(spec);
    if (trial_index >= spec.n_trials) {
        throw ValidationError("trial index " + std::to_string(trial_index) + " >= n_trials " +
                              std::to_string(spec.n_trials));
    }
    return TrialRunner(spec).run(trial_index);
}

EnsembleStats run_ensemble(const RunSpec& spec) {
    validate(spec);
    const TrialRunner runner(spec);
    const std::uint64_t blocks = (spec.n_trials + kBlockSize - 1) / kBlockSize;
    const unsigned workers = resolve_workers(spec.workers, blocks);

    std::vector<std::optional<EnsembleAccumulator>> partial(blocks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        try {
            for (std::uint64_t b = next++; b < blocks; b = next++) {
                EnsembleAccumulator acc(spec.scenario.graph, spec.horizon, spec.scenario.kappa);
                const std::uint64_t end = std::min(spec.n_trials, (b + 1) * kBlockSize);
                for (std::uint64_t i = b * kBlockSize; i < end; ++i) acc.add(runner.run(i));
                partial[b].emplace(std::move(acc));
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = blocks;
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    EnsembleAccumulator total(spec.scenario.graph, spec.horizon, spec.scenario.kappa);
    for (auto& p : partial) total.merge(std::move(*p));
    return total.finalize();
}

EnsembleStats oracle_exact(const RunSpec& spec) {
    validate(spec);
    const auto& sc = spec.scenario;
    if (sc.environment.jamming_noise > 0.0) {
        throw UnsupportedConfigError("exact oracle requires a noiseless environment (jamming_noise = " +
                                     detail::num(sc.environment.jamming_noise) + ")");
    }
    switch (spec.policy) {
    case PolicyKind::Static: {
        const TrialRunner runner(spec);
        auto st = propagate_static(spec, runner.crisis());
        finish_exact(st, spec);
        return st;
    }
    case PolicyKind::Greedy: {
        if (sc.policy.epsilon != 0.0) {
            throw UnsupportedConfigError("exact oracle supports the greedy policy only with epsilon = 0 (got " +
                                         detail::num(sc.policy.epsilon) + ")");
        }
        // With no exploration and a deterministic environment the trajectory
        // is a single path taken with probability 1.
        const auto trace = TrialRunner(spec).run(0);
        EnsembleAccumulator acc(sc.graph, spec.horizon, sc.kappa);
        acc.add(trace);
        auto st = acc.finalize();
        finish_exact(st, spec);
        return st;
    }
    case PolicyKind::Adaptive:
        break;
    }
    throw UnsupportedConfigError("exact oracle does not support the adaptive policy");
}

} // namespace pace
