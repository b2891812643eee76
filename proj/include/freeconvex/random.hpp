#pragma once

// Deterministic seeded RNG (splitmix64 core). The standard distributions are
// implementation-defined, which would break byte-identical reruns of the CLI,
// so uniform and gaussian draws are spelled out here. Per-trial generators
// are derived from (seed, stream) so sampling loops have no shared state.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace freeconvex {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        Rng r(a ^ (0x9E3779B97F4A7C15ULL + (b << 6) + (b >> 2)));
        r.next_u64();
        return r.next_u64();
    }

    static Rng derive(std::uint64_t seed, std::uint64_t stream) {
        return Rng(mix(seed, stream));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Box-Muller; draws two uniforms per call, no cached state.
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

}  // namespace freeconvex
