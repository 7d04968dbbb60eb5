#pragma once

#include <string_view>

namespace pace {

enum class ThreatSource { Cvss, NasaMatrix, Direct };

/// Normalized threat score rho in [0, 1] and where it came from.
struct ThreatScore {
    double rho = 0.0;
    ThreatSource source = ThreatSource::Direct;
};

/// Likelihood/severity cell of the 5x5 NASA risk matrix, both levels 1..5.
struct NasaBin {
    int likelihood = 1;
    int severity = 1;
};

/// Default cost of a recovery (utility-gaining) transition when a scenario
/// does not override it.
inline constexpr double kDefaultRecoveryCost = 2.0;

/// rho = score / 10. Throws ValidationError outside [0, 10].
ThreatScore normalize_cvss(double score);

/// rho = likelihood * severity / 25. Throws ValidationError on levels outside 1..5.
ThreatScore nasa_lookup(NasaBin bin);

/// rho given directly, e.g. an environmental jamming estimate. Must lie in [0, 1].
ThreatScore direct_threat(double rho);

/// Base probability of falling back one layer: rho * p_max.
/// Throws ConfigError unless 0 < p_max < 1.
double base_transition_probability(ThreatScore rho, double p_max);

/// Base cost of moving between states with utilities omega_from -> omega_to.
/// Utility losses cost cost_scale per unit of utility; transitions that gain
/// utility are recoveries and are charged recovery_cost instead.
double base_cost(double omega_from, double omega_to, double cost_scale,
                 double recovery_cost = kDefaultRecoveryCost);

std::string_view to_string(ThreatSource source);

} // namespace pace
