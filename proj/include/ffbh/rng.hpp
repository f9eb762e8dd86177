#pragma once

#include <cstdint>

namespace ffbh {

// Default seed for every randomized routine that does not receive an explicit one.
// Randomized routines must stay deterministic for a fixed seed; anything derived
// from user-visible state derives a fresh stream via derive() so that streams for
// different purposes (or different draw indices) never overlap.
inline constexpr std::uint64_t kDefaultSeed = 1;

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

// splitmix64 stream. Cheap, seedable, and stateless to copy.
struct CounterRng {
    std::uint64_t state;

    explicit CounterRng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // value in [0, n), n >= 1; modulo bias is irrelevant at the field sizes used here
    std::uint64_t below(std::uint64_t n) { return next() % n; }
};

// Independent stream addressed by (seed, index); index-adjacent streams do not overlap.
inline CounterRng derive_rng(std::uint64_t seed, std::uint64_t index) {
    return CounterRng(detail::mix64(seed ^ detail::mix64(index + 0x517cc1b727220a95ULL)));
}

} // namespace ffbh
