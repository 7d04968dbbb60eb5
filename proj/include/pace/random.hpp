#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace pace {

/// SplitMix64 finalizer. Used to derive independent seeds from
/// (master_seed, trial_index, stream) without any shared state.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Counter-based seed derivation. The same triple always yields the same
/// seed, so trial results do not depend on scheduling or worker count.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index,
                                    std::uint64_t stream = 0) noexcept {
    return splitmix64(splitmix64(master_seed ^ splitmix64(index)) + stream);
}

// Streams drawn inside a single trial. The environment gets its own stream
// so every policy sees the same jamming trajectory for a given trial index.
inline constexpr std::uint64_t kEnvironmentStream = 0;
inline constexpr std::uint64_t kPolicyStream = 1;

/// Thin wrapper over std::mt19937_64. The distribution code is written out
/// here instead of using <random> distributions, whose output is
/// implementation-defined, so golden files are portable across toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t index(std::size_t n) {
        __extension__ using u128 = unsigned __int128;
        // Lemire's multiply-shift with rejection; unbiased.
        const auto range = static_cast<std::uint64_t>(n);
        std::uint64_t x = engine_();
        auto m = static_cast<u128>(x) * range;
        auto low = static_cast<std::uint64_t>(m);
        if (low < range) {
            const std::uint64_t threshold = (0 - range) % range;
            while (low < threshold) {
                x = engine_();
                m = static_cast<u128>(x) * range;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace pace
