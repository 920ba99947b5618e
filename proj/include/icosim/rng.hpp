#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace icosim {

// All randomness flows through these helpers instead of std distributions,
// whose output sequences are implementation-defined. Keeping the mapping
// from raw engine output to doubles explicit makes seeded runs reproduce
// bit-for-bit independently of the standard library.
using Rng = std::mt19937_64;

// Uniform in [0, 1) with 53 bits of precision.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in [lo, hi).
inline double uniform_in(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

// Uniform strictly inside (lo, hi).
inline double uniform_open(Rng& rng, double lo, double hi) {
    double x;
    do {
        x = uniform_in(rng, lo, hi);
    } while (x <= lo || x >= hi);
    return x;
}

// Unbiased draw from [0, n) via rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// Fisher-Yates shuffle driven by uniform_below.
template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_below(rng, i)]);
    }
}

} // namespace icosim
