#pragma once

#include <cstdint>
#include <random>

namespace hecad::nn {

// Seed wrapper: the same seed yields bit-identical pseudo-random streams
// on a given platform, which is what every trainer in this repo relies on.
struct RngSeed {
    std::uint64_t seed = 0;
};

// splitmix64 mix step, used to derive independent sub-seeds (e.g. one per
// layer) from a master seed without correlated streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(RngSeed seed, std::uint64_t salt = 0) {
    return std::mt19937_64(derive_seed(seed.seed, salt));
}

}  // namespace hecad::nn
