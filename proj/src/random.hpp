#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace infrared::detail {

/// SplitMix64 (Steele, Lea, Flood 2014). Tiny state, good enough to key
/// per-row noise streams and to scramble seeds.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    SplitMix64 s(a ^ SplitMix64(b).next());
    return s.next();
}

/// Uniform double in (0, 1] from the top 53 bits.
inline double unit_open_closed(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform double in [0, 1).
inline double unit_closed_open(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

inline double uniform01(std::mt19937_64& rng) { return unit_closed_open(rng()); }

/// Uniform integer in [0, n) by rejection (no modulo bias, platform independent).
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

template <typename It>
void shuffle(It first, It last, std::mt19937_64& rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) std::iter_swap(first + (i - 1), first + uniform_index(rng, i));
}

/// Marsaglia-Tsang gamma sampler (shape > 0, unit scale).
inline double gamma_sample(std::mt19937_64& rng, double shape) {
    if (shape < 1.0) {
        const double u = unit_open_closed(rng());
        return gamma_sample(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            const double u1 = unit_open_closed(rng());
            const double u2 = unit_closed_open(rng());
            x = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = unit_open_closed(rng());
        if (u < 1.0 - 0.0331 * x * x * x * x || std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

}  // namespace infrared::detail
