#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ss2f {

/// Master seed plus a stream id. Distinct streams from one seed give
/// independent generators, so replications and parallel workers can draw
/// without coordination. Same (seed, stream) always reproduces the same
/// draws bit for bit.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    RngSeed with_stream(std::uint64_t s) const { return {seed, s}; }
    RngSeed offset(std::uint64_t delta) const { return {seed, stream + delta}; }
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Deterministic normal generator. The uniform-to-double conversion and the
/// Box-Muller transform are spelled out here (rather than using the standard
/// library distributions) because the standard does not pin down
/// distribution output, and byte-reproducibility of every artifact is part
/// of the contract.
class NormalRng {
public:
    explicit NormalRng(RngSeed seed) : engine_(mix(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on (0, 1]; never returns 0 so log() below is safe.
    double uniform_pos() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// One standard normal draw; consumes exactly two engine outputs.
    double normal() {
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 6.283185307179586476925286766559 * uniform01();
        return r * std::cos(a);
    }

private:
    static std::uint64_t mix(RngSeed seed) {
        std::uint64_t s = seed.seed;
        std::uint64_t a = detail::splitmix64(s);
        s ^= 0xA3EC647659359ACDull * (seed.stream + 1);
        std::uint64_t b = detail::splitmix64(s);
        return a ^ (b + 0x9E3779B97F4A7C15ull);
    }

    std::mt19937_64 engine_;
};

}  // namespace ss2f
