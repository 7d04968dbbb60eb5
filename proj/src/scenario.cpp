#include "pace/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "format.hpp"

namespace pace {

using json = nlohmann::json;
using detail::num;

ScenarioError::ScenarioError(std::string where, std::string field, const std::string& message)
    : ValidationError(where + (field.empty() ? "" : ": " + field) + ": " + message),
      where_(std::move(where)),
      field_(std::move(field)) {}

ThreatScore ThreatSpec::score() const {
    switch (source) {
    case ThreatSource::Cvss: return normalize_cvss(cvss);
    case ThreatSource::NasaMatrix: return nasa_lookup(nasa);
    case ThreatSource::Direct: return direct_threat(rho);
    }
    return direct_threat(rho);
}

RunSpec ScenarioConfig::make_run_spec(PolicyKind policy) const {
    RunSpec spec{scenario, policy, run.n_trials, run.horizon, run.seed, run.terminate_on_failure, 0};
    return spec;
}

namespace {

// A JSON value plus its dotted path, for error messages.
class Field {
  public:
    Field(const json& value, std::string path, const std::string& origin)
        : value_(value), path_(std::move(path)), origin_(origin) {}

    [[noreturn]] void fail(const std::string& message) const {
        throw ScenarioError(origin_, path_, message);
    }

    const json& value() const noexcept { return value_; }
    const std::string& path() const noexcept { return path_; }

    Field child(const std::string& key) const {
        return Field(value_.at(key), path_.empty() ? key : path_ + "." + key, origin_);
    }
    Field element(std::size_t i) const {
        return Field(value_.at(i), path_ + "[" + std::to_string(i) + "]", origin_);
    }

    bool has(const std::string& key) const { return value_.contains(key) && !value_.at(key).is_null(); }

    const Field& object(std::initializer_list<const char*> allowed) const {
        if (!value_.is_object()) fail("expected an object");
        for (const auto& [key, _] : value_.items()) {
            if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
                Field(value_.at(key), path_.empty() ? key : path_ + "." + key, origin_)
                    .fail("unknown field");
            }
        }
        return *this;
    }

    const Field& array() const {
        if (!value_.is_array()) fail("expected an array");
        return *this;
    }

    Field require(const std::string& key) const {
        if (!has(key)) {
            Field(json(), path_.empty() ? key : path_ + "." + key, origin_).fail("required field is missing");
        }
        return child(key);
    }

    double number() const {
        if (!value_.is_number()) fail("expected a number");
        const double v = value_.get<double>();
        if (!std::isfinite(v)) fail("expected a finite number");
        return v;
    }

    std::int64_t integer() const {
        if (!value_.is_number_integer()) fail("expected an integer");
        return value_.get<std::int64_t>();
    }

    std::uint64_t unsigned_integer() const {
        if (value_.is_number_unsigned()) return value_.get<std::uint64_t>();
        if (value_.is_number_integer() && value_.get<std::int64_t>() >= 0) {
            return static_cast<std::uint64_t>(value_.get<std::int64_t>());
        }
        fail("expected a non-negative integer");
    }

    bool boolean() const {
        if (!value_.is_boolean()) fail("expected true or false");
        return value_.get<bool>();
    }

    std::string string() const {
        if (!value_.is_string()) fail("expected a string");
        return value_.get<std::string>();
    }

    double number_in(double lo, double hi) const {
        const double v = number();
        if (v < lo || v > hi) fail("value " + num(v) + " outside [" + num(lo) + ", " + num(hi) + "]");
        return v;
    }

    double number_at_least(double lo) const {
        const double v = number();
        if (v < lo) fail("value " + num(v) + " must be >= " + num(lo));
        return v;
    }

  private:
    const json& value_;
    std::string path_;
    const std::string& origin_;
};

double opt_number_in(const Field& obj, const char* key, double fallback, double lo, double hi) {
    return obj.has(key) ? obj.child(key).number_in(lo, hi) : fallback;
}

double opt_number_at_least(const Field& obj, const char* key, double fallback, double lo) {
    return obj.has(key) ? obj.child(key).number_at_least(lo) : fallback;
}

ThreatSpec parse_threat(const Field& f) {
    f.object({"source", "rho", "score", "likelihood", "severity", "p_max", "cost_scale",
              "recovery_cost"});
    ThreatSpec t;
    const Field src = f.require("source");
    const std::string s = src.string();
    if (s == "direct") {
        t.source = ThreatSource::Direct;
        t.rho = f.require("rho").number_in(0.0, 1.0);
    } else if (s == "cvss") {
        t.source = ThreatSource::Cvss;
        t.cvss = f.require("score").number_in(0.0, 10.0);
    } else if (s == "nasa") {
        t.source = ThreatSource::NasaMatrix;
        auto level = [&](const char* key) {
            const auto v = f.require(key).integer();
            if (v < 1 || v > 5) f.child(key).fail("level " + std::to_string(v) + " outside 1..5");
            return static_cast<int>(v);
        };
        t.nasa = {level("likelihood"), level("severity")};
    } else {
        src.fail("unknown threat source '" + s + "' (expected direct, cvss or nasa)");
    }
    const Field pmax = f.require("p_max");
    t.p_max = pmax.number();
    if (!(t.p_max > 0.0 && t.p_max < 1.0)) pmax.fail("value " + num(t.p_max) + " outside (0, 1)");
    if (f.has("cost_scale")) {
        const Field cs = f.child("cost_scale");
        t.cost_scale = cs.number();
        if (!(t.cost_scale > 0.0)) cs.fail("value " + num(t.cost_scale) + " must be > 0");
    }
    t.recovery_cost = opt_number_at_least(f, "recovery_cost", kDefaultRecoveryCost, 0.0);
    return t;
}

StateNode parse_state(const Field& f) {
    f.object({"id", "layer", "utility", "classification"});
    StateNode s;
    s.id = f.require("id").string();
    if (s.id.empty()) f.child("id").fail("state id must not be empty");
    const Field layer = f.require("layer");
    try {
        s.layer = parse_layer(layer.string());
    } catch (const ValidationError& e) {
        layer.fail(e.what());
    }
    s.utility = f.require("utility").number_in(0.0, 1.0);
    s.classification = s.id == kNominalStateId ? StateClass::Nominal : StateClass::Degraded;
    if (f.has("classification")) {
        const Field c = f.child("classification");
        try {
            s.classification = parse_state_class(c.string());
        } catch (const ValidationError& e) {
            c.fail(e.what());
        }
    }
    return s;
}

TransitionSpec parse_transition(const Field& f) {
    f.object({"from", "to", "p", "cost"});
    TransitionSpec t;
    t.from = f.require("from").string();
    t.to = f.require("to").string();
    if (f.has("p")) t.p = f.child("p").number_in(0.0, 1.0);
    if (f.has("cost")) t.cost = f.child("cost").number_at_least(0.0);
    return t;
}

EnvironmentSpec parse_environment(const Field& f) {
    f.object({"baseline_jamming", "jamming_noise", "energy_drain_per_step", "energy_cost_coupling",
              "concurrency_energy_threshold"});
    EnvironmentSpec e;
    e.baseline_jamming = opt_number_in(f, "baseline_jamming", e.baseline_jamming, 0.0, 1.0);
    e.jamming_noise = opt_number_at_least(f, "jamming_noise", e.jamming_noise, 0.0);
    e.energy_drain_per_step = opt_number_at_least(f, "energy_drain_per_step", e.energy_drain_per_step, 0.0);
    e.energy_cost_coupling = opt_number_at_least(f, "energy_cost_coupling", e.energy_cost_coupling, 0.0);
    e.concurrency_energy_threshold =
        opt_number_in(f, "concurrency_energy_threshold", e.concurrency_energy_threshold, 0.0, 1.0);
    return e;
}

CrisisSpec parse_crisis(const Field& f) {
    f.object({"start_t", "duration", "jamming_level", "cost_multiplier", "blocked_transitions",
              "suppressed_states"});
    CrisisSpec c;
    if (f.has("start_t")) {
        const auto v = f.child("start_t").integer();
        if (v < 0 || v > std::numeric_limits<int>::max()) f.child("start_t").fail("must be >= 0");
        c.start_t = static_cast<int>(v);
    }
    if (f.has("duration")) {
        const auto v = f.child("duration").integer();
        if (v < 1 || v > std::numeric_limits<int>::max()) f.child("duration").fail("must be >= 1");
        c.duration = static_cast<int>(v);
    }
    c.jamming_level = opt_number_in(f, "jamming_level", c.jamming_level, 0.0, 1.0);
    c.cost_multiplier = opt_number_at_least(f, "cost_multiplier", 1.0, 1.0);
    if (f.has("blocked_transitions")) {
        const Field list = f.child("blocked_transitions");
        list.array();
        for (std::size_t i = 0; i < list.value().size(); ++i) {
            const Field pair = list.element(i);
            pair.array();
            if (pair.value().size() != 2) pair.fail("expected a [from, to] pair");
            c.blocked_transitions.emplace_back(pair.element(0).string(), pair.element(1).string());
        }
    }
    if (f.has("suppressed_states")) {
        const Field list = f.child("suppressed_states");
        list.array();
        for (std::size_t i = 0; i < list.value().size(); ++i) {
            c.suppressed_states.push_back(list.element(i).string());
        }
    }
    return c;
}

PolicyParams parse_policy_params(const Field& f) {
    f.object({"p_stay", "lambda", "gamma", "alpha", "epsilon", "adaptive_scale_scope"});
    PolicyParams p;
    p.p_stay = opt_number_in(f, "p_stay", p.p_stay, 0.0, 1.0);
    p.lambda = opt_number_at_least(f, "lambda", p.lambda, 0.0);
    p.gamma = opt_number_at_least(f, "gamma", p.gamma, 0.0);
    p.alpha = opt_number_at_least(f, "alpha", p.alpha, 0.0);
    p.epsilon = opt_number_in(f, "epsilon", p.epsilon, 0.0, 1.0);
    if (f.has("adaptive_scale_scope")) {
        const Field s = f.child("adaptive_scale_scope");
        try {
            p.adaptive_scale_scope = parse_scale_scope(s.string());
        } catch (const ValidationError& e) {
            s.fail(e.what());
        }
    }
    return p;
}

RunDefaults parse_run(const Field& f) {
    f.object({"n_trials", "horizon", "seed", "terminate_on_failure"});
    RunDefaults r;
    if (f.has("n_trials")) {
        r.n_trials = f.child("n_trials").unsigned_integer();
        if (r.n_trials < 1) f.child("n_trials").fail("must be >= 1");
    }
    if (f.has("horizon")) {
        const auto h = f.child("horizon").integer();
        if (h < 0 || h > 1'000'000) f.child("horizon").fail("must lie in [0, 1000000]");
        r.horizon = static_cast<int>(h);
    }
    if (f.has("seed")) r.seed = f.child("seed").unsigned_integer();
    if (f.has("terminate_on_failure")) r.terminate_on_failure = f.child("terminate_on_failure").boolean();
    return r;
}

std::vector<EdgeSpec> resolve(const std::vector<StateNode>& states,
                              const std::vector<TransitionSpec>& transitions,
                              const std::optional<ThreatSpec>& threat, const std::string& origin) {
    auto find = [&](const std::string& id) -> const StateNode* {
        auto it = std::find_if(states.begin(), states.end(), [&](const StateNode& s) { return s.id == id; });
        return it == states.end() ? nullptr : &*it;
    };

    std::optional<ThreatScore> score;
    if (threat) {
        try {
            score = threat->score();
        } catch (const ValidationError& e) {
            throw ScenarioError(origin, "threat", e.what());
        }
    }

    std::vector<EdgeSpec> out;
    out.reserve(transitions.size());
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const auto& t = transitions[i];
        const std::string path = "transitions[" + std::to_string(i) + "]";
        const StateNode* from = find(t.from);
        if (!from) throw ScenarioError(origin, path + ".from", "unknown state '" + t.from + "'");
        const StateNode* to = find(t.to);
        if (!to) throw ScenarioError(origin, path + ".to", "unknown state '" + t.to + "'");
        const EdgeKind kind = classify_edge(from->layer, to->layer);

        EdgeSpec e{t.from, t.to, 0.0, 0.0};
        if (t.p) {
            e.p = *t.p;
        } else if (kind != EdgeKind::Downward) {
            throw ScenarioError(origin, path + ".p",
                                std::string("required for ") + std::string(to_string(kind)) +
                                    " transitions (only downward probabilities are derived)");
        } else if (!threat) {
            throw ScenarioError(origin, path + ".p", "omitted but the scenario has no threat block");
        } else {
            e.p = base_transition_probability(*score, threat->p_max);
        }

        if (t.cost) {
            e.cost = *t.cost;
        } else if (!threat) {
            throw ScenarioError(origin, path + ".cost", "omitted but the scenario has no threat block");
        } else {
            const int climbed = static_cast<int>(from->layer) - static_cast<int>(to->layer);
            const double recovery = threat->recovery_cost * std::max(1, climbed);
            e.cost = base_cost(from->utility, to->utility, threat->cost_scale, recovery);
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::string describe_location(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

} // namespace

std::vector<EdgeSpec> resolve_transitions(const ScenarioConfig& config) {
    return resolve(config.states, config.transitions, config.threat, config.name);
}

ScenarioConfig parse_scenario(const json& doc, const std::string& origin) {
    const Field root(doc, "", origin);
    root.object({"version", "name", "threat", "states", "transitions", "environment", "crisis",
                 "policy", "run", "kappa"});

    ScenarioConfig cfg;
    const Field version = root.require("version");
    const auto v = version.integer();
    if (v != kScenarioVersion) {
        version.fail("unsupported version " + std::to_string(v) + " (expected " +
                     std::to_string(kScenarioVersion) + ")");
    }
    cfg.version = static_cast<int>(v);
    cfg.name = root.has("name") ? root.child("name").string() : origin;
    if (root.has("threat")) cfg.threat = parse_threat(root.child("threat"));

    const Field states = root.require("states");
    states.array();
    for (std::size_t i = 0; i < states.value().size(); ++i) {
        cfg.states.push_back(parse_state(states.element(i)));
    }
    const Field transitions = root.require("transitions");
    transitions.array();
    for (std::size_t i = 0; i < transitions.value().size(); ++i) {
        cfg.transitions.push_back(parse_transition(transitions.element(i)));
    }

    if (root.has("environment")) cfg.scenario.environment = parse_environment(root.child("environment"));
    if (root.has("crisis")) cfg.scenario.environment.crisis = parse_crisis(root.child("crisis"));
    if (root.has("policy")) cfg.scenario.policy = parse_policy_params(root.child("policy"));
    if (root.has("run")) cfg.run = parse_run(root.child("run"));
    if (root.has("kappa")) {
        const Field k = root.child("kappa");
        cfg.scenario.kappa = k.number();
        if (!(cfg.scenario.kappa > 1.0)) k.fail("value " + num(cfg.scenario.kappa) + " must exceed 1");
    }

    const auto edges = resolve(cfg.states, cfg.transitions, cfg.threat, origin);
    try {
        cfg.scenario.graph = PaceGraph::build(cfg.states, edges);
    } catch (const ValidationError& e) {
        throw ScenarioError(origin, "states/transitions", e.what());
    }
    if (cfg.scenario.environment.crisis) {
        try {
            validate(*cfg.scenario.environment.crisis, cfg.scenario.graph);
        } catch (const Error& e) {
            throw ScenarioError(origin, "crisis", e.what());
        }
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ScenarioError(path.string() + ":" + describe_location(text, e.byte == 0 ? 0 : e.byte - 1),
                            "", std::string("syntax error: ") + e.what());
    }
    return parse_scenario(doc, path.string());
}

json serialize_scenario(const ScenarioConfig& cfg) {
    json doc;
    doc["version"] = cfg.version;
    doc["name"] = cfg.name;
    if (cfg.threat) {
        const auto& t = *cfg.threat;
        json th;
        th["source"] = std::string(to_string(t.source));
        switch (t.source) {
        case ThreatSource::Direct: th["rho"] = t.rho; break;
        case ThreatSource::Cvss: th["score"] = t.cvss; break;
        case ThreatSource::NasaMatrix:
            th["likelihood"] = t.nasa.likelihood;
            th["severity"] = t.nasa.severity;
            break;
        }
        th["p_max"] = t.p_max;
        th["cost_scale"] = t.cost_scale;
        th["recovery_cost"] = t.recovery_cost;
        doc["threat"] = th;
    }
    json states = json::array();
    for (const auto& s : cfg.states) {
        states.push_back({{"id", s.id},
                          {"layer", std::string(to_string(s.layer))},
                          {"utility", s.utility},
                          {"classification", std::string(to_string(s.classification))}});
    }
    doc["states"] = states;
    json transitions = json::array();
    for (const auto& t : cfg.transitions) {
        json e{{"from", t.from}, {"to", t.to}};
        if (t.p) e["p"] = *t.p;
        if (t.cost) e["cost"] = *t.cost;
        transitions.push_back(e);
    }
    doc["transitions"] = transitions;

    const auto& env = cfg.scenario.environment;
    doc["environment"] = {{"baseline_jamming", env.baseline_jamming},
                          {"jamming_noise", env.jamming_noise},
                          {"energy_drain_per_step", env.energy_drain_per_step},
                          {"energy_cost_coupling", env.energy_cost_coupling},
                          {"concurrency_energy_threshold", env.concurrency_energy_threshold}};
    if (env.crisis) {
        const auto& c = *env.crisis;
        json blocked = json::array();
        for (const auto& [from, to] : c.blocked_transitions) blocked.push_back({from, to});
        doc["crisis"] = {{"start_t", c.start_t},
                         {"duration", c.duration},
                         {"jamming_level", c.jamming_level},
                         {"cost_multiplier", c.cost_multiplier},
                         {"blocked_transitions", blocked},
                         {"suppressed_states", c.suppressed_states}};
    }
    const auto& p = cfg.scenario.policy;
    doc["policy"] = {{"p_stay", p.p_stay},
                     {"lambda", p.lambda},
                     {"gamma", p.gamma},
                     {"alpha", p.alpha},
                     {"epsilon", p.epsilon},
                     {"adaptive_scale_scope", std::string(to_string(p.adaptive_scale_scope))}};
    doc["run"] = {{"n_trials", cfg.run.n_trials},
                  {"horizon", cfg.run.horizon},
                  {"seed", cfg.run.seed},
                  {"terminate_on_failure", cfg.run.terminate_on_failure}};
    doc["kappa"] = cfg.scenario.kappa;
    return doc;
}

} // namespace pace
