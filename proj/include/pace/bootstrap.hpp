#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace pace {

struct ConfidenceInterval {
    double estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

/// True when a lies entirely above b.
inline bool strictly_above(const ConfidenceInterval& a, const ConfidenceInterval& b) noexcept {
    return a.lower > b.upper;
}

inline constexpr std::size_t kDefaultResamples = 2000;

/// Percentile bootstrap interval for the mean of xs.
ConfidenceInterval bootstrap_mean(std::span<const double> xs, std::uint64_t seed,
                                  std::size_t resamples = kDefaultResamples, double level = 0.95);

/// Percentile bootstrap interval for mean(num) / max(mean(den), kCostFloor),
/// resampling (num, den) pairs jointly. Used for ensemble DREI.
ConfidenceInterval bootstrap_ratio_of_means(std::span<const double> num,
                                            std::span<const double> den, std::uint64_t seed,
                                            std::size_t resamples = kDefaultResamples,
                                            double level = 0.95);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> xs);

/// Linear-interpolated quantile of an unsorted sample.
double quantile(std::span<const double> xs, double q);

} // namespace pace
