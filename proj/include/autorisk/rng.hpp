#pragma once

#include <cmath>
#include <cstdint>

namespace autorisk {

// SplitRng -- seedable counter-based generator used for every randomized
// path in the library. SplitMix64 core, so the output sequence is identical
// on every platform (std::* distributions are implementation-defined and
// would break the byte-identical-output contract).
//
// Stream splitting rule: substream(i) derives an independent generator from
// (seed, i) alone. Dataset generators draw one substream per record index,
// which makes parallel generation bit-identical to sequential generation.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed) : state_(mix(seed ^ kStreamSalt)) {}

    /// Independent generator for sub-stream `index` of this generator's seed.
    SplitRng substream(std::uint64_t index) const {
        SplitRng r(0);
        r.state_ = mix(state_ + kGolden * (index + 1));
        return r;
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    /// Uniform in [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Box-Muller, no caching: every call consumes exactly two uniforms.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * kPi * u2);
    }

    double lognormal(double mu, double sigma) {
        return std::exp(normal(mu, sigma));
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kStreamSalt = 0x8E0C9CE926B9FB5FULL;
    static constexpr double kPi = 3.14159265358979323846;

    // SplitMix64 finalizer (Steele, Lea, Flood 2014).
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace autorisk
