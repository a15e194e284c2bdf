#include "fadeopt/rng.hpp"

#include <cmath>
#include <numbers>

namespace fadeopt {

double Rng::normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t sub_seed(std::uint64_t master, std::string_view tag) {
    // FNV-1a over the tag, then one splitmix round mixed with the master.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    Rng mix(master ^ h);
    return mix.next_u64();
}

}  // namespace fadeopt
