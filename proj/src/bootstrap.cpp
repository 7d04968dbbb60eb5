#include "pace/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pace/errors.hpp"
#include "pace/metrics.hpp"
#include "pace/random.hpp"

namespace pace {

namespace {

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sorted_quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

void check(std::span<const double> xs, std::size_t resamples, double level) {
    if (xs.empty()) throw ValidationError("bootstrap needs at least one observation");
    if (resamples == 0) throw ValidationError("bootstrap needs at least one resample");
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("confidence level outside (0, 1)");
}

template <class Stat>
ConfidenceInterval percentile_interval(double estimate, std::size_t n, std::uint64_t seed,
                                       std::size_t resamples, double level, Stat&& stat) {
    std::vector<double> stats(resamples);
    std::vector<std::size_t> idx(n);
    for (std::size_t b = 0; b < resamples; ++b) {
        Rng rng(derive_seed(seed, b));
        for (auto& i : idx) i = rng.index(n);
        stats[b] = stat(idx);
    }
    std::sort(stats.begin(), stats.end());
    const double tail = (1.0 - level) / 2.0;
    return {estimate, sorted_quantile(stats, tail), sorted_quantile(stats, 1.0 - tail)};
}

} // namespace

ConfidenceInterval bootstrap_mean(std::span<const double> xs, std::uint64_t seed,
                                  std::size_t resamples, double level) {
    check(xs, resamples, level);
    return percentile_interval(mean_of(xs), xs.size(), seed, resamples, level,
                               [&](const std::vector<std::size_t>& idx) {
                                   double s = 0.0;
                                   for (auto i : idx) s += xs[i];
                                   return s / static_cast<double>(idx.size());
                               });
}

ConfidenceInterval bootstrap_ratio_of_means(std::span<const double> num,
                                            std::span<const double> den, std::uint64_t seed,
                                            std::size_t resamples, double level) {
    check(num, resamples, level);
    if (num.size() != den.size()) {
        throw ValidationError("bootstrap ratio needs paired samples of equal length");
    }
    const double estimate = drei_ratio(mean_of(num), mean_of(den));
    return percentile_interval(estimate, num.size(), seed, resamples, level,
                               [&](const std::vector<std::size_t>& idx) {
                                   double a = 0.0;
                                   double b = 0.0;
                                   for (auto i : idx) {
                                       a += num[i];
                                       b += den[i];
                                   }
                                   const double m = static_cast<double>(idx.size());
                                   return drei_ratio(a / m, b / m);
                               });
}

double sample_stddev(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile(std::span<const double> xs, double q) {
    if (xs.empty()) throw ValidationError("quantile of an empty sample");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    return sorted_quantile(sorted, std::clamp(q, 0.0, 1.0));
}

} // namespace pace
