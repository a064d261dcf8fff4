#pragma once

// Deterministic splittable RNG: splitmix64 streams with Box-Muller
// normals. Per-sample streams derive independently from (seed, index),
// so parallel sample generation is order-free and bitwise reproducible.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace escurve {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1].
    double next_unit() {
        return (next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    // Standard normal via Box-Muller (one value per call; pairs cached).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_unit();
        double u2 = next_unit();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    // Derive an independent stream for a sub-task.
    static SplitMix64 derive(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mix(seed ^ (0xD1B54A32D192ED03ull * (index + 1)));
        mix.next_u64();
        return mix;
    }

  private:
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace escurve
