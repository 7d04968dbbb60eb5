#include "pace/threat_model.hpp"

#include <cmath>

#include "format.hpp"
#include "pace/errors.hpp"

namespace pace {

using detail::num;

ThreatScore normalize_cvss(double score) {
    if (!std::isfinite(score) || score < 0.0 || score > 10.0) {
        throw ValidationError("CVSS base score " + num(score) + " outside [0, 10]");
    }
    return {score / 10.0, ThreatSource::Cvss};
}

ThreatScore nasa_lookup(NasaBin bin) {
    if (bin.likelihood < 1 || bin.likelihood > 5) {
        throw ValidationError("NASA likelihood level " + std::to_string(bin.likelihood) +
                              " outside 1..5");
    }
    if (bin.severity < 1 || bin.severity > 5) {
        throw ValidationError("NASA severity level " + std::to_string(bin.severity) +
                              " outside 1..5");
    }
    return {static_cast<double>(bin.likelihood * bin.severity) / 25.0, ThreatSource::NasaMatrix};
}

ThreatScore direct_threat(double rho) {
    if (!std::isfinite(rho) || rho < 0.0 || rho > 1.0) {
        throw ValidationError("threat score rho " + num(rho) + " outside [0, 1]");
    }
    return {rho, ThreatSource::Direct};
}

double base_transition_probability(ThreatScore rho, double p_max) {
    if (!(p_max > 0.0 && p_max < 1.0)) {
        throw ConfigError("p_max " + num(p_max) + " outside (0, 1)");
    }
    if (!(rho.rho >= 0.0 && rho.rho <= 1.0)) {
        throw ValidationError("threat score rho " + num(rho.rho) + " outside [0, 1]");
    }
    return rho.rho * p_max;
}

double base_cost(double omega_from, double omega_to, double cost_scale, double recovery_cost) {
    auto in_unit = [](double w) { return w >= 0.0 && w <= 1.0; };
    if (!in_unit(omega_from)) {
        throw ValidationError("source utility " + num(omega_from) + " outside [0, 1]");
    }
    if (!in_unit(omega_to)) {
        throw ValidationError("target utility " + num(omega_to) + " outside [0, 1]");
    }
    if (!(cost_scale > 0.0) || !std::isfinite(cost_scale)) {
        throw ValidationError("cost_scale " + num(cost_scale) + " must be positive");
    }
    if (!(recovery_cost >= 0.0) || !std::isfinite(recovery_cost)) {
        throw ValidationError("recovery cost " + num(recovery_cost) + " must be non-negative");
    }
    if (omega_to > omega_from) {
        return recovery_cost;
    }
    return cost_scale * (omega_from - omega_to);
}

std::string_view to_string(ThreatSource source) {
    switch (source) {
    case ThreatSource::Cvss: return "cvss";
    case ThreatSource::NasaMatrix: return "nasa";
    case ThreatSource::Direct: return "direct";
    }
    return "direct";
}

} // namespace pace
