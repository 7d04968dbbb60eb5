#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "pace/bootstrap.hpp"
#include "pace/metrics.hpp"
#include "pace/montecarlo.hpp"
#include "pace/scenario.hpp"

namespace pace {

// Output file names and CSV column sets. Changing any of these is a schema
// change and must be reflected in docs/output_format.md.
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kTimeseriesFile = "timeseries.csv";
inline constexpr const char* kFinalStatesFile = "final_states.csv";
inline constexpr const char* kCostDistributionFile = "cost_distribution.csv";
inline constexpr const char* kComparisonFile = "comparison.json";
inline constexpr const char* kOracleFile = "oracle.json";

/// Ensembles below this size get their comparison flagged low-confidence.
inline constexpr std::uint64_t kLowConfidenceTrials = 30;

/// Headline numbers of one policy with bootstrap intervals over trials.
struct PolicySummary {
    PolicyKind policy = PolicyKind::Static;
    ConfidenceInterval utility;
    ConfidenceInterval cost;
    ConfidenceInterval drei;
    double cost_stddev = 0.0;
};

PolicySummary summarize(const EnsembleStats& stats, PolicyKind policy, std::uint64_t seed);

/// Fixed-precision number formatting shared by every CSV writer.
std::string format_number(double value);

std::string timeseries_csv(const EnsembleStats& stats, const PaceGraph& graph);
std::string final_states_csv(const EnsembleStats& stats);
std::string cost_distribution_csv(const EnsembleStats& stats, const PaceGraph& graph);

nlohmann::json summary_json(const EnsembleStats& stats, const PolicySummary& summary,
                            const ScenarioConfig& config, const RunSpec& spec);

nlohmann::json comparison_json(const std::vector<PolicySummary>& summaries,
                               const std::vector<const EnsembleStats*>& stats,
                               const ScenarioConfig& config, const RunSpec& spec);

nlohmann::json oracle_json(const EnsembleStats& stats, const ScenarioConfig& config,
                           const RunSpec& spec);

/// Writes summary, time series, final states and cost distribution into dir.
void write_run_outputs(const std::filesystem::path& dir, const EnsembleStats& stats,
                       const PolicySummary& summary, const ScenarioConfig& config,
                       const RunSpec& spec);

/// Creates dir if needed and writes content to dir/name; throws IoError.
void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content);

std::string dump_json(const nlohmann::json& doc);

} // namespace pace
