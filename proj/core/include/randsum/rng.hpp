#pragma once

#include <cmath>
#include <cstdint>

namespace randsum {

/*
 * Counter-based 64-bit generator (SplittableRandom construction): the state
 * advances by a per-stream odd increment and the output is a finalizing mix.
 * Streams derived from (seed, stream_index) have distinct increments, so
 * replications own non-overlapping sequences and results are reproducible
 * across runs of one build regardless of threading.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed)
        : state_(mix(seed ^ kGoldenGamma)), gamma_(kGoldenGamma) {}

    /// Independent stream for one replication index.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_index) {
        Rng r(seed);
        r.state_ = mix(mix(seed + kGoldenGamma) ^ mix(stream_index + 0x5851F42D4C957F2DULL));
        r.gamma_ = mix(stream_index ^ mix(seed)) | 1ULL; // odd => full period
        return r;
    }

    std::uint64_t next_u64() {
        state_ += gamma_;
        return mix(state_);
    }

    /// Uniform draw in the open interval (0, 1); never returns 0 or 1.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    double exponential(double rate) { return -std::log(uniform01()) / rate; }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    static constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
    std::uint64_t gamma_;
};

} // namespace randsum
