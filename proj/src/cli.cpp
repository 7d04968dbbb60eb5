#include "pace/cli.hpp"

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pace/errors.hpp"
#include "pace/report.hpp"
#include "pace/scenario.hpp"

namespace pace::cli {

namespace {

RunSpec make_spec(const ScenarioConfig& cfg, const Options& opts, PolicyKind policy) {
    RunSpec spec = cfg.make_run_spec(policy);
    if (opts.trials) spec.n_trials = *opts.trials;
    if (opts.horizon) spec.horizon = *opts.horizon;
    if (opts.seed) spec.master_seed = *opts.seed;
    spec.workers = opts.workers;
    return spec;
}

// Maps library exceptions onto the documented exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const LookupError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const UnsupportedConfigError& e) {
        err << "error: unsupported configuration: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
}

// A scenario that cannot be read is a usage problem, not a runtime failure.
ScenarioConfig load_or_usage(const Options& opts) {
    try {
        return load_scenario(opts.scenario);
    } catch (const IoError& e) {
        throw ValidationError(e.what());
    }
}

} // namespace

int cmd_run(const Options& opts, PolicyKind policy, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load_or_usage(opts);
        const auto spec = make_spec(cfg, opts, policy);
        const auto stats = run_ensemble(spec);
        const auto summary = summarize(stats, policy, spec.master_seed);
        write_run_outputs(opts.out, stats, summary, cfg, spec);
        log << to_string(policy) << ": utility " << format_number(stats.final_utility()) << ", cost "
            << format_number(stats.final_cost()) << ", DREI " << format_number(stats.final_drei())
            << " (" << stats.n_trials << " trials, T = " << stats.horizon << ") -> "
            << opts.out.string() << '\n';
        return int{kSuccess};
    });
}

int cmd_compare(const Options& opts, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load_or_usage(opts);
        std::vector<EnsembleStats> results;
        std::vector<PolicySummary> summaries;
        RunSpec last;
        for (auto policy : kAllPolicies) {
            const auto spec = make_spec(cfg, opts, policy);
            results.push_back(run_ensemble(spec));
            summaries.push_back(summarize(results.back(), policy, spec.master_seed));
            write_run_outputs(opts.out / std::string(to_string(policy)), results.back(),
                              summaries.back(), cfg, spec);
            last = spec;
        }
        std::vector<const EnsembleStats*> ptrs;
        for (const auto& r : results) ptrs.push_back(&r);
        const auto doc = comparison_json(summaries, ptrs, cfg, last);
        write_file(opts.out, kComparisonFile, dump_json(doc));
        for (std::size_t i = 0; i < summaries.size(); ++i) {
            log << to_string(summaries[i].policy) << ": utility "
                << format_number(results[i].final_utility()) << ", cost "
                << format_number(results[i].final_cost()) << ", DREI "
                << format_number(results[i].final_drei()) << '\n';
        }
        if (doc["low_confidence"].get<bool>()) log << "note: orderings are low-confidence at this trial count\n";
        log << "comparison -> " << (opts.out / kComparisonFile).string() << '\n';
        return int{kSuccess};
    });
}

int cmd_oracle(const Options& opts, PolicyKind policy, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load_or_usage(opts);
        const auto spec = make_spec(cfg, opts, policy);
        const auto stats = oracle_exact(spec);
        write_file(opts.out, kOracleFile, dump_json(oracle_json(stats, cfg, spec)));
        log << "oracle (" << to_string(policy) << "): expected cost "
            << format_number(stats.final_cost()) << ", P(failure) "
            << format_number(stats.fraction(StateClass::Failure)) << " -> "
            << (opts.out / kOracleFile).string() << '\n';
        return int{kSuccess};
    });
}

int cmd_validate(const Options& opts, std::ostream& log, std::ostream& err) {
    return guarded(err, [&] {
        const auto cfg = load_or_usage(opts);
        const auto& g = cfg.scenario.graph;
        log << cfg.name << ": " << g.size() << " states, " << g.edges().size() << " transitions, "
            << "T = " << cfg.run.horizon << ", " << cfg.run.n_trials << " trials, seed "
            << cfg.run.seed << (cfg.scenario.environment.crisis ? ", crisis configured" : "")
            << "\nok\n";
        return int{kSuccess};
    });
}

int main(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
    CLI::App app{"PACE fallback simulator: static, adaptive and epsilon-greedy policies"};
    app.require_subcommand(1);

    Options opts;
    std::string policy_name = "greedy";
    std::uint64_t trials = 0;
    int horizon = 0;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, bool with_policy, bool with_run_overrides) {
        sub->add_option("--scenario", opts.scenario, "Scenario file")->required();
        if (with_policy) {
            sub->add_option("--policy", policy_name, "static | adaptive | greedy")
                ->check(CLI::IsMember({"static", "adaptive", "greedy"}));
        }
        if (with_run_overrides) {
            sub->add_option("--trials", trials, "Number of Monte Carlo trials")->check(CLI::PositiveNumber);
            sub->add_option("--horizon", horizon, "Timesteps per trial")->check(CLI::NonNegativeNumber);
            sub->add_option("--seed", seed, "Master seed");
            sub->add_option("--workers", opts.workers, "Worker threads (0 = all cores)");
            sub->add_option("--out", opts.out, "Output directory");
        }
    };

    auto* run = app.add_subcommand("run", "Simulate one policy");
    add_common(run, true, true);
    auto* compare = app.add_subcommand("compare", "Simulate all three policies");
    add_common(compare, false, true);
    auto* oracle = app.add_subcommand("oracle", "Exact forward-propagation oracle");
    add_common(oracle, true, false);
    oracle->add_option("--horizon", horizon, "Timesteps")->check(CLI::NonNegativeNumber);
    oracle->add_option("--out", opts.out, "Output directory");
    auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
    add_common(validate_cmd, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            log << app.help();
            return kSuccess;
        }
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kUsageError;
    }

    CLI::App* active = app.get_subcommands().front();
    auto given = [&](const char* flag) {
        const auto* opt = active->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    if (given("--trials")) opts.trials = trials;
    if (given("--horizon")) opts.horizon = horizon;
    if (given("--seed")) opts.seed = seed;

    const auto policy = parse_policy(policy_name);
    if (active == run) return cmd_run(opts, policy, log, err);
    if (active == compare) return cmd_compare(opts, log, err);
    if (active == oracle) return cmd_oracle(opts, policy, log, err);
    return cmd_validate(opts, log, err);
}

} // namespace pace::cli
