#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace netcpd {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed keyed by an ordered list of integers (replicate index, interval
/// endpoints, ...). The same (master, keys) always yields the same seed, so
/// streams do not depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t state = splitmix64(master);
    for (std::uint64_t k : keys) state = splitmix64(state ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return state;
}

inline Rng make_stream(std::uint64_t master, std::initializer_list<std::uint64_t> keys) {
    return Rng{derive_seed(master, keys)};
}

}  // namespace netcpd
