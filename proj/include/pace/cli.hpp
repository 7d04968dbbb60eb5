#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "pace/policies.hpp"

namespace pace::cli {

enum ExitCode : int { kSuccess = 0, kUsageError = 1, kRuntimeError = 2 };

struct Options {
    std::filesystem::path scenario;
    std::filesystem::path out = "results";
    std::optional<std::uint64_t> trials;
    std::optional<int> horizon;
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
};

/// Simulates one policy and writes summary.json, timeseries.csv,
/// final_states.csv and cost_distribution.csv into opts.out.
int cmd_run(const Options& opts, PolicyKind policy, std::ostream& log, std::ostream& err);

/// Runs all three policies with the same seed into opts.out/<policy>/ and
/// writes opts.out/comparison.json.
int cmd_compare(const Options& opts, std::ostream& log, std::ostream& err);

/// Writes opts.out/oracle.json with exact occupancy and expected cost.
int cmd_oracle(const Options& opts, PolicyKind policy, std::ostream& log, std::ostream& err);

/// Loads and validates a scenario, printing a short description.
int cmd_validate(const Options& opts, std::ostream& log, std::ostream& err);

/// Entry point for the `pace` executable.
int main(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

} // namespace pace::cli
