#pragma once

#include <cmath>
#include <cstdint>

// Counter-based generator (splitmix64 output function over seed + counter).
// Unlike a stateful engine, the i-th draw depends only on (seed, i), so
// samplers can fork one independent substream per point and stay bit-exact
// under any parallel schedule, including rejection loops of varying length.

namespace boundarykit {

class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller; draws exactly two uniforms per call so
    // the counter advance is data-independent
    double normal() {
        double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // independent substream; stream ids fed through the same mixer so nearby
    // ids do not correlate
    CounterRng fork(std::uint64_t stream) const {
        std::uint64_t z = seed_ ^ (0xD1B54A32D192ED03ull + stream * 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return CounterRng(z ^ (z >> 31));
    }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace boundarykit
