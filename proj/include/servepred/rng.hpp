// rng.hpp - deterministic random helpers pinned to exact algorithms, so
// seeded results are reproducible independent of the standard library's
// distribution implementations.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace servepred {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic sub-seed for a named unit of work (tree index, player hash).
inline uint64_t derive_seed(uint64_t master, uint64_t salt) {
    uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (salt + 1));
    return splitmix64(s);
}

// Unbiased draw from [0, n) via rejection sampling.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t n) {
    if (n <= 1) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return (rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller (pinned, no library distribution).
inline double normal(std::mt19937_64& rng) {
    double u1, u2;
    do {
        u1 = uniform_unit(rng);
    } while (u1 <= 0);
    u2 = uniform_unit(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace servepred
