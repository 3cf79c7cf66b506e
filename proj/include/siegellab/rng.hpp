// Counter-based random streams. Every draw is a pure function of
// (seed, stream_id, counter), so per-sample streams keyed by sample index give
// results that are independent of worker count and scheduling.
#pragma once

#include <cmath>
#include <cstdint>

namespace siegellab::rng {

// SplitMix64/Murmur3-style avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (b + 0x9e3779b97f4a7c15ULL));
}

class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t stream_id)
        : key_(mix64(seed, stream_id)) {}

    // Stream for the index-th sample of a tagged experiment.
    static Stream for_sample(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
        return Stream(seed, mix64(tag, index));
    }

    std::uint64_t next_u64() { return mix64(key_, counter_++); }

    // Uniform on [0,1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0,1].
    double next_unit_open() { return 1.0 - next_unit(); }

    double uniform(double a, double b) { return a + (b - a) * next_unit(); }

    // Standard normal via Box-Muller; the pair partner is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = next_unit_open();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(t);
        have_cached_ = true;
        return r * std::cos(t);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_cached_ = false;
    double cached_ = 0.0;
};

} // namespace siegellab::rng
