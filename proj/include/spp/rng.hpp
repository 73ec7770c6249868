#ifndef SPP_RNG_HPP
#define SPP_RNG_HPP

#include <cstdint>
#include <random>

namespace spp {

/// (seed, stream) fully determines a generator; replicate k of a seeded run
/// uses stream = k so replicates can run concurrently and reproducibly.
struct RngSeed {
    std::uint64_t seed{0};
    std::uint64_t stream{0};
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_engine(RngSeed s) {
    const std::uint64_t mixed = splitmix64(splitmix64(s.seed) ^ splitmix64(~s.stream));
    return std::mt19937_64(mixed);
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace spp

#endif
