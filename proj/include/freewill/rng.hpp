#pragma once

#include <cstdint>

#include "freewill/errors.hpp"

namespace freewill {

// Deterministic 64-bit generator (splitmix64: fixed odd increment on a
// 64-bit state, output run through a finalizing mix).
//
// Contract: an identical seed yields an identical draw sequence within one
// build of this library. Every run owns its own streams; a stream may be
// moved between threads but never shared. Every sampling helper consumes
// exactly one draw.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution. One draw.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform index in [0, n). One draw.
    int uniform_index(int n) {
        if (n < 1) throw InvalidInput("uniform_index: n must be >= 1");
        const int i = static_cast<int>(next_double() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace freewill
