#include "pace/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pace/errors.hpp"

namespace pace {

using json = nlohmann::json;

namespace {

constexpr std::uint64_t kBootstrapStream = 0xB0075;

std::vector<double> final_utilities(const EnsembleStats& st) {
    std::vector<double> out;
    out.reserve(st.trials.size());
    for (const auto& t : st.trials) out.push_back(t.final_adjusted_utility);
    return out;
}

std::vector<double> total_costs(const EnsembleStats& st) {
    std::vector<double> out;
    out.reserve(st.trials.size());
    for (const auto& t : st.trials) out.push_back(t.total_cost);
    return out;
}

json interval(const ConfidenceInterval& ci) { return json::array({ci.lower, ci.upper}); }

json final_states(const EnsembleStats& st) {
    json out = json::object();
    for (std::size_t c = 0; c < kStateClassCount; ++c) {
        const auto name = std::string(to_string(static_cast<StateClass>(c)));
        out[name] = {{"count", st.final_counts[c]}, {"fraction", st.final_fractions[c]}};
    }
    return out;
}

json config_echo(const ScenarioConfig& config, const RunSpec& spec) {
    json doc = serialize_scenario(config);
    doc["run"]["n_trials"] = spec.n_trials;
    doc["run"]["horizon"] = spec.horizon;
    doc["run"]["seed"] = spec.master_seed;
    return doc;
}

template <class Get, class Better>
std::vector<std::string> rank(const std::vector<PolicySummary>& s, Get get, Better better) {
    std::vector<const PolicySummary*> order;
    for (const auto& p : s) order.push_back(&p);
    std::stable_sort(order.begin(), order.end(),
                     [&](const PolicySummary* a, const PolicySummary* b) { return better(get(*a), get(*b)); });
    std::vector<std::string> names;
    for (const auto* p : order) names.emplace_back(to_string(p->policy));
    return names;
}

} // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

PolicySummary summarize(const EnsembleStats& stats, PolicyKind policy, std::uint64_t seed) {
    PolicySummary s;
    s.policy = policy;
    if (stats.exact || stats.trials.empty()) {
        s.utility = {stats.final_utility(), stats.final_utility(), stats.final_utility()};
        s.cost = {stats.final_cost(), stats.final_cost(), stats.final_cost()};
        s.drei = {stats.final_drei(), stats.final_drei(), stats.final_drei()};
        return s;
    }
    const auto u = final_utilities(stats);
    const auto c = total_costs(stats);
    const auto base = derive_seed(seed, static_cast<std::uint64_t>(policy), kBootstrapStream);
    s.utility = bootstrap_mean(u, derive_seed(base, 0));
    s.cost = bootstrap_mean(c, derive_seed(base, 1));
    s.drei = bootstrap_ratio_of_means(u, c, derive_seed(base, 2));
    s.cost_stddev = sample_stddev(c);
    return s;
}

std::string timeseries_csv(const EnsembleStats& st, const PaceGraph& graph) {
    std::ostringstream out;
    out << "t,mean_utility,mean_cumulative_cost,drei,drei_defined";
    for (const auto& s : graph.states()) out << ",p_" << s.id;
    out << '\n';
    for (std::size_t t = 0; t < st.mean_utility.size(); ++t) {
        out << t << ',' << format_number(st.mean_utility[t]) << ','
            << format_number(st.mean_cumulative_cost[t]) << ',' << format_number(st.drei[t]) << ','
            << (st.drei_defined[t] ? 1 : 0);
        for (double p : st.occupancy[t]) out << ',' << format_number(p);
        out << '\n';
    }
    return out.str();
}

std::string final_states_csv(const EnsembleStats& st) {
    std::ostringstream out;
    out << "class,count,fraction\n";
    for (std::size_t c = 0; c < kStateClassCount; ++c) {
        out << to_string(static_cast<StateClass>(c)) << ',' << st.final_counts[c] << ','
            << format_number(st.final_fractions[c]) << '\n';
    }
    return out.str();
}

std::string cost_distribution_csv(const EnsembleStats& st, const PaceGraph& graph) {
    std::ostringstream out;
    out << "trial,total_cost,final_state,final_class,final_utility,drei\n";
    for (const auto& t : st.trials) {
        out << t.trial_index << ',' << format_number(t.total_cost) << ',' << graph.id(t.final_state)
            << ',' << to_string(t.final_class) << ',' << format_number(t.final_adjusted_utility) << ','
            << format_number(t.drei) << '\n';
    }
    return out.str();
}

json summary_json(const EnsembleStats& st, const PolicySummary& s, const ScenarioConfig& config,
                  const RunSpec& spec) {
    json doc;
    doc["policy"] = std::string(to_string(spec.policy));
    doc["scenario"] = config.name;
    doc["seed"] = spec.master_seed;
    doc["n_trials"] = st.n_trials;
    doc["horizon"] = st.horizon;
    doc["exact"] = st.exact;
    doc["final"] = {{"utility", st.final_utility()},
                    {"cost", st.final_cost()},
                    {"drei", st.final_drei()},
                    {"drei_defined", static_cast<bool>(st.drei_defined.back())}};
    doc["ci95"] = {{"utility", interval(s.utility)}, {"cost", interval(s.cost)}, {"drei", interval(s.drei)}};
    doc["cost_stddev"] = s.cost_stddev;
    doc["final_states"] = final_states(st);
    doc["config"] = config_echo(config, spec);
    return doc;
}

json comparison_json(const std::vector<PolicySummary>& summaries,
                     const std::vector<const EnsembleStats*>& stats, const ScenarioConfig& config,
                     const RunSpec& spec) {
    json doc;
    doc["scenario"] = config.name;
    doc["seed"] = spec.master_seed;
    doc["n_trials"] = spec.n_trials;
    doc["horizon"] = spec.horizon;

    json policies = json::object();
    for (std::size_t i = 0; i < summaries.size(); ++i) {
        const auto& s = summaries[i];
        const auto& st = *stats[i];
        policies[std::string(to_string(s.policy))] = {
            {"utility", st.final_utility()},
            {"cost", st.final_cost()},
            {"drei", st.final_drei()},
            {"ci95", {{"utility", interval(s.utility)}, {"cost", interval(s.cost)}, {"drei", interval(s.drei)}}},
            {"cost_stddev", s.cost_stddev},
            {"final_states", final_states(st)}};
    }
    doc["policies"] = policies;

    auto higher = [](double a, double b) { return a > b; };
    auto lower = [](double a, double b) { return a < b; };
    doc["orderings"] = {
        {"utility", rank(summaries, [](const PolicySummary& p) { return p.utility.estimate; }, higher)},
        {"cost", rank(summaries, [](const PolicySummary& p) { return p.cost.estimate; }, lower)},
        {"drei", rank(summaries, [](const PolicySummary& p) { return p.drei.estimate; }, higher)}};

    // The expected ranking is greedy, adaptive, static on every metric.
    const PolicySummary* by_kind[3] = {nullptr, nullptr, nullptr};
    for (const auto& s : summaries) by_kind[static_cast<int>(s.policy)] = &s;
    json checks = json::object();
    if (by_kind[0] && by_kind[1] && by_kind[2]) {
        const auto& st = *by_kind[0];
        const auto& ad = *by_kind[1];
        const auto& gr = *by_kind[2];
        checks["utility"] = {{"holds", gr.utility.estimate > ad.utility.estimate && ad.utility.estimate > st.utility.estimate},
                             {"ci_separated", strictly_above(gr.utility, ad.utility) && strictly_above(ad.utility, st.utility)}};
        checks["cost"] = {{"holds", gr.cost.estimate < ad.cost.estimate && ad.cost.estimate < st.cost.estimate},
                          {"ci_separated", strictly_above(ad.cost, gr.cost) && strictly_above(st.cost, ad.cost)}};
        checks["drei"] = {{"holds", gr.drei.estimate > ad.drei.estimate && ad.drei.estimate > st.drei.estimate},
                          {"ci_separated", strictly_above(gr.drei, ad.drei) && strictly_above(ad.drei, st.drei)}};
    }
    doc["expected_ordering"] = {{"ranking", {"greedy", "adaptive", "static"}}, {"checks", checks}};
    doc["low_confidence"] = spec.n_trials < kLowConfidenceTrials;
    return doc;
}

json oracle_json(const EnsembleStats& st, const ScenarioConfig& config, const RunSpec& spec) {
    const auto& g = config.scenario.graph;
    json doc;
    doc["policy"] = std::string(to_string(spec.policy));
    doc["scenario"] = config.name;
    doc["horizon"] = st.horizon;
    doc["exact"] = true;
    json series = json::array();
    for (std::size_t t = 0; t < st.mean_utility.size(); ++t) {
        json occ = json::object();
        for (StateIndex s = 0; s < g.size(); ++s) occ[g.id(s)] = st.occupancy[t][s];
        series.push_back({{"t", t},
                          {"mean_utility", st.mean_utility[t]},
                          {"expected_cumulative_cost", st.mean_cumulative_cost[t]},
                          {"drei", st.drei[t]},
                          {"drei_defined", static_cast<bool>(st.drei_defined[t])},
                          {"occupancy", occ}});
    }
    doc["timeseries"] = series;
    json fin = json::object();
    for (std::size_t c = 0; c < kStateClassCount; ++c) {
        fin[std::string(to_string(static_cast<StateClass>(c)))] = st.final_fractions[c];
    }
    doc["final_states"] = fin;
    doc["final"] = {{"utility", st.final_utility()}, {"cost", st.final_cost()}, {"drei", st.final_drei()}};
    return doc;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_run_outputs(const std::filesystem::path& dir, const EnsembleStats& stats,
                       const PolicySummary& summary, const ScenarioConfig& config, const RunSpec& spec) {
    const auto& g = config.scenario.graph;
    write_file(dir, kSummaryFile, dump_json(summary_json(stats, summary, config, spec)));
    write_file(dir, kTimeseriesFile, timeseries_csv(stats, g));
    write_file(dir, kFinalStatesFile, final_states_csv(stats));
    write_file(dir, kCostDistributionFile, cost_distribution_csv(stats, g));
}

} // namespace pace
