#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "pace/errors.hpp"
#include "pace/montecarlo.hpp"
#include "pace/threat_model.hpp"

namespace pace {

inline constexpr int kScenarioVersion = 1;

/// Scenario file problem. `where` is "file" or "file:line:col"; `field` is
/// the dotted path of the offending value (empty for syntax errors).
class ScenarioError : public ValidationError {
  public:
    ScenarioError(std::string where, std::string field, const std::string& message);

    [[nodiscard]] const std::string& where() const noexcept { return where_; }
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

  private:
    std::string where_;
    std::string field_;
};

/// Inputs used to derive omitted downward probabilities and edge costs.
struct ThreatSpec {
    ThreatSource source = ThreatSource::Direct;
    double rho = 0.0;    // direct
    double cvss = 0.0;   // cvss base score
    NasaBin nasa{};      // nasa matrix cell
    double p_max = 0.5;
    double cost_scale = 10.0;
    double recovery_cost = kDefaultRecoveryCost; // per layer climbed, at least one

    [[nodiscard]] ThreatScore score() const;
};

/// Transition as written in the file. Omitted values are derived from the
/// threat block: p only for downward edges, cost for every edge.
struct TransitionSpec {
    std::string from;
    std::string to;
    std::optional<double> p;
    std::optional<double> cost;
};

struct RunDefaults {
    std::uint64_t n_trials = kDefaultTrials;
    int horizon = kDefaultHorizon;
    std::uint64_t seed = 42;
    bool terminate_on_failure = false;
};

struct ScenarioConfig {
    int version = kScenarioVersion;
    std::string name;
    std::optional<ThreatSpec> threat;
    std::vector<StateNode> states;
    std::vector<TransitionSpec> transitions;
    Scenario scenario; // built graph plus environment, policy and kappa
    RunDefaults run;

    [[nodiscard]] RunSpec make_run_spec(PolicyKind policy) const;
};

/// Parses and fully validates a scenario document. `origin` names the source
/// in error messages.
ScenarioConfig parse_scenario(const nlohmann::json& doc, const std::string& origin);

/// Reads a scenario file. JSON with // and /* */ comments is accepted.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Document that parse_scenario maps back to an equivalent config.
nlohmann::json serialize_scenario(const ScenarioConfig& config);

/// Resolved edge list, with every derived p and cost filled in.
std::vector<EdgeSpec> resolve_transitions(const ScenarioConfig& config);

} // namespace pace
