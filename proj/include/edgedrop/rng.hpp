#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace edgedrop {

/// Deterministic random source used throughout the library.
///
/// The engine is a mersenne-twister (mt19937_64, fully specified by the
/// standard) seeded through the splitmix64 finalizer. Uniform and gaussian
/// draws are mapped from raw engine output with explicit bit arithmetic
/// (no standard-library distributions), so identical seeds yield identical
/// streams on every platform and standard library.
///
/// Substreams derived with `stream(seed, id)` are statistically independent
/// and O(1) to create; they are the splitting mechanism for per-sample and
/// per-trial reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

    /// Seed for the `id`-th substream of `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t id) {
        return mix(mix(seed) + 0x9E3779B97F4A7C15ULL * (id + 1));
    }

    static Rng stream(std::uint64_t seed, std::uint64_t id) {
        return Rng(derive(seed, id));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0,1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Unbiased integer in [0,n), n >= 1 (rejection sampling).
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    /// Standard normal via Box-Muller; consumes two uniforms per call.
    double gaussian() {
        // First uniform shifted into (0,1] so the logarithm stays finite.
        const double u1 =
            (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

private:
    // splitmix64 finalizer; avalanches low-entropy seeds.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace edgedrop
