#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace diagpack {

// mt19937_64 raw output is specified by the standard, so everything built on
// it here is reproducible across platforms. std::uniform_int_distribution and
// std::shuffle are not; do not use them anywhere results must be stable.
using Rng = std::mt19937_64;

inline std::uint64_t rng_below(Rng& rng, std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased without touching
    // implementation-defined distributions.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

template <typename T>
void rng_shuffle(Rng& rng, std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

inline double rng_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0,1)
}

inline double rng_signed_unit(Rng& rng) {
    return 2.0 * rng_unit(rng) - 1.0;  // [-1,1)
}

}  // namespace diagpack
