#ifndef PENSION_RNG_HPP
#define PENSION_RNG_HPP

#include <cstdint>
#include <random>

namespace pension {

/// SplitMix64 finalizer; used to derive well-mixed substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Engine for one path's substream, a pure function of (seed, path_index).
/// Paths can therefore run on any thread in any order without changing a
/// single draw.
inline std::mt19937_64 path_engine(std::uint64_t seed, std::uint64_t path_index) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(path_index)));
}

}  // namespace pension

#endif  // PENSION_RNG_HPP
