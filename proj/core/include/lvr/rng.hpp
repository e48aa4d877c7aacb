#pragma once

#include <cstdint>

namespace lvr::rng {

// Counter-based generator: every draw is a pure function of
// (seed, path, step, slot), so batches of paths can be generated in any
// order, on any number of threads, with bit-identical output.

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t path,
                         std::uint64_t step, std::uint64_t slot) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ path);
    h = splitmix64(h ^ step);
    h = splitmix64(h ^ slot);
    return h;
}

// Uniform draw in (0,1]; never returns 0 so log() is safe.
inline double uniform(std::uint64_t seed, std::uint64_t path,
                      std::uint64_t step, std::uint64_t slot) {
    const std::uint64_t bits = key(seed, path, step, slot);
    return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

// Standard normal via Box-Muller on two counter slots.
double normal(std::uint64_t seed, std::uint64_t path, std::uint64_t step);

// Derives a per-path seed from a base seed, for APIs that take one seed
// per path rather than a (seed, path) pair.
inline std::uint64_t path_seed(std::uint64_t base, std::uint64_t path_index) {
    return splitmix64(splitmix64(base) ^ path_index);
}

}  // namespace lvr::rng
