// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>

namespace ssf {

/// SplitMix64 generator (Steele, Lea & Flood 2014). Counter-based state
/// update with a 64-bit finalizer, so results are identical on every
/// platform; all seeded behavior in this library derives from it.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double uniform_open() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; always consumes exactly two draws.
    double normal() {
        const double u1 = uniform_open();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, bound) by 128-bit multiply; bound must be > 0.
    std::uint64_t below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

private:
    std::uint64_t state_;
};

/// Derives an independent substream seed from (seed, tag); used to make
/// per-day / per-purpose streams that do not depend on evaluation order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag) {
    SplitMix64 g(seed ^ (0xD1B54A32D192ED03ull * (tag + 1)));
    g.next();
    return g.next();
}

}  // namespace ssf
