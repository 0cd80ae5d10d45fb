#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace qamidx {

// Counter-derived substream generator: the state is hashed from
// (seed, point, trial), so any trial of any SNR point can be generated in
// isolation and parallel runs reproduce serial ones bit for bit. Draws advance
// a splitmix64 stream; Gaussians come from the Box-Muller transform. The name
// below is echoed in simulation output so results stay attributable.
inline constexpr const char* rng_algorithm_name = "splitmix64-substream+box-muller";

class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t point, std::uint64_t trial) {
        std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ull);
        h = mix(h ^ (point + 0x3c6ef372fe94f82aull));
        h = mix(h ^ (trial + 0x78dde6e5fd29f05bull));
        state_ = h;
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        return mix(state_);
    }

    // Uniform draw from {0, ..., m-1} by rejection; exact for every m.
    std::uint64_t uniform_mod(std::uint64_t m) {
        std::uint64_t rem = (~std::uint64_t(0) % m + 1) % m;
        std::uint64_t r = next_u64();
        while (rem != 0 && r >= std::uint64_t(0) - rem) r = next_u64();
        return r % m;
    }

    // 53-bit uniform on (0, 1]; never returns 0 so log() stays finite.
    double uniform_pos() { return double((next_u64() >> 11) + 1) * 0x1p-53; }

    // 53-bit uniform on [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1p-53; }

    std::pair<double, double> gaussian_pair() {
        double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        double theta = 2.0 * 3.14159265358979323846 * uniform();
        return {r * std::cos(theta), r * std::sin(theta)};
    }

  private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace qamidx
