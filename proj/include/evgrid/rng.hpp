#pragma once

#include <cstdint>
#include <random>

namespace evgrid {

// SplitMix64 finalizer; used to derive independent RNG streams from one
// root seed so that subsystems (traffic, renewables, game) do not perturb
// each other's sequences when one of them changes.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
    return splitmix64(root ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(root, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(root, a, b), c);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

// Stream tags for the per-subsystem RNG split.
namespace rng_stream {
inline constexpr std::uint64_t traffic = 1;
inline constexpr std::uint64_t renewables_pv = 2;
inline constexpr std::uint64_t renewables_wind = 3;
inline constexpr std::uint64_t game = 4;
inline constexpr std::uint64_t soc = 5;
inline constexpr std::uint64_t sweep = 6;
}  // namespace rng_stream

}  // namespace evgrid
