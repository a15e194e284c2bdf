#pragma once

#include <cstdint>
#include <string_view>

namespace fadeopt {

// Counter-based generator (splitmix64 core). Every random draw in the
// toolkit flows through one of these, keyed by a master seed plus a named
// sub-stream, so components are independently reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    // Standard normal via Box-Muller (no cached spare; two uniforms per draw).
    double normal();

private:
    std::uint64_t state_;
};

// Derives a sub-stream seed from a master seed and a textual tag
// (e.g. "env", "agent/2", "tree/17").
std::uint64_t sub_seed(std::uint64_t master, std::string_view tag);

}  // namespace fadeopt
