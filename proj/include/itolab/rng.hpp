#pragma once

#include <cmath>
#include <cstdint>

namespace itolab {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}
}  // namespace detail

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Counter-based seed derivation. Streams for (seed, a) and (seed, a')
/// are unrelated for a != a', which is what keeps ensembles reproducible
/// under any thread schedule.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
    return detail::mix64(seed + kGoldenGamma * (a + 1));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(seed, a), b);
}

/// SplitMix64 stream. Small, fast, and the state advance is a plain
/// counter increment, so skipping ahead is O(1) if ever needed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kGoldenGamma;
        return detail::mix64(state_);
    }

    /// Uniform on [0, 1).
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1]; safe as a log() argument.
    double next_uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller, producing pairs.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = next_uniform_pos();
        const double v = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        const double a = 6.283185307179586476925286766559 * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    /// Poisson count by exponential accumulation (fine for the small
    /// means used here, lambda*T of order a few).
    std::uint64_t next_poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        const double limit = std::exp(-mean);
        double prod = next_uniform_pos();
        std::uint64_t n = 0;
        while (prod > limit) {
            prod *= next_uniform_pos();
            ++n;
        }
        return n;
    }

    /// Exponential with the given rate.
    double next_exponential(double rate) {
        return -std::log(next_uniform_pos()) / rate;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace itolab
