#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "qtp/matrix.hpp"

namespace qtp {

// Stable 64-bit mixer (splitmix64). Used for deriving per-trial seeds so
// each trial is individually reproducible from (seed, index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ (0xA3EC647659359ACDULL * (index + 1)));
}

// Seeded random stream. Doubles are built from raw engine bits rather than
// std::*_distribution so sequences are identical across standard libraries.
struct RngStream {
    std::uint64_t seed = 0;
    std::mt19937_64 engine;

    explicit RngStream(std::uint64_t s) : seed(s), engine(s) {}

    // uniform on (0,1), never exactly 0 or 1
    double uniform() {
        return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
    }

    // re and im independently ~ N(0,1), via one Box-Muller pair
    Cx gaussian_complex() {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double t = 2.0 * M_PI * uniform();
        return Cx{r * std::cos(t), r * std::sin(t)};
    }
};

}  // namespace qtp
