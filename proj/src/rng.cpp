#include "ethopipe/rng.hpp"

#include "ethopipe/errors.hpp"

namespace ethopipe {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b) {
    std::uint64_t x = mix64(seed + 0x9e3779b97f4a7c15ULL);
    x = mix64(x ^ (stream_a + 0xbf58476d1ce4e5b9ULL));
    x = mix64(x ^ (stream_b + 0x94d049bb133111ebULL));
    for (auto& s : state_) {
        x += 0x9e3779b97f4a7c15ULL;
        s = mix64(x);
    }
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t Rng::uniform_int(std::uint64_t n) {
    if (n == 0) throw ValidationError("uniform_int: n must be >= 1");
    const std::uint64_t bound = n * (~0ULL / n);  // largest multiple of n <= 2^64-1
    std::uint64_t r;
    do {
        r = next_u64();
    } while (r >= bound);
    return r % n;
}

bool Rng::bernoulli(double p) {
    return uniform() < p;
}

}  // namespace ethopipe
