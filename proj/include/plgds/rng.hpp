#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace plgds {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Derived seeds: a named stage or an indexed sub-stream never depends on
// how many other streams were drawn before it.
inline std::uint64_t substream(std::uint64_t seed, std::string_view stage) {
    return splitmix64(seed ^ fnv1a(stage));
}

inline std::uint64_t substream(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) + index);
}

using Rng = std::mt19937_64;

// Uniform integer in [0, n) without relying on the library's distribution
// implementation, so output is identical across standard libraries.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class It>
void fisher_yates(It first, It last, Rng& rng) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        auto j = uniform_below(rng, i);
        std::swap(first[i - 1], first[j]);
    }
}

}  // namespace plgds
