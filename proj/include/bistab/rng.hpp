// rng.hpp — Deterministic per-sample noise streams. Sample streams are
// derived from the master seed with the splitmix64 finalizer, so any sample
// can be regenerated independently of execution order.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace bistab {

// mix64: splitmix64 finalizer applied to master_seed + (index+1)*golden-ratio.
inline std::uint64_t mix64(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Standard normal stream: mt19937_64 + explicit Box-Muller (pairwise), kept
// self-contained so trajectories are bitwise reproducible per stream seed.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1], u2 in [0,1)
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace bistab
