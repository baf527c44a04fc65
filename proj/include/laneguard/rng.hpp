#pragma once

#include <cstdint>
#include <random>

namespace laneguard {

// splitmix64: cheap, well-mixed stream for deriving independent sub-seeds
// from one master seed. Worker seeds must not depend on scheduling, so every
// parallel unit (tree, injection, lane stream) gets derive_seed(master, tag).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
    return splitmix64(master ^ splitmix64(tag));
}

inline std::mt19937_64 make_rng(std::uint64_t master, std::uint64_t tag) {
    return std::mt19937_64(derive_seed(master, tag));
}

}  // namespace laneguard
