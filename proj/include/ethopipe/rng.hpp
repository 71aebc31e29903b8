#pragma once

#include <cstdint>

namespace ethopipe {

/// Deterministic, platform-independent PRNG (xoshiro256** seeded via a
/// splitmix64 chain). Streams derived from (seed, stream_a, stream_b) are
/// independent of traversal order, which is what keeps pipeline output
/// identical for every worker count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : Rng(seed, 0, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform();
    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n); n must be >= 1. Rejection-sampled, unbiased.
    std::uint64_t uniform_int(std::uint64_t n);
    bool bernoulli(double p);

private:
    std::uint64_t state_[4];
};

}  // namespace ethopipe
