#pragma once

#include <cmath>
#include <cstdint>

namespace fitwave {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// xoshiro256++ generator. Self-contained so that streams are reproducible
// across platforms and standard libraries; std:: distributions are not used
// anywhere in the simulation path.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s = splitmix64(s);
            word = s;
        }
        // A zero state would be a fixed point; splitmix64 of anything is
        // nonzero in at least one word, but guard regardless.
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Exponential waiting time with the given rate (> 0).
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n), n >= 1. Lemire's rejection method; exact.
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = (unsigned __int128)next_u64() * n;
        auto lo = (std::uint64_t)m;
        if (lo < n) {
            const std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                m = (unsigned __int128)next_u64() * n;
                lo = (std::uint64_t)m;
            }
        }
        return (std::uint64_t)(m >> 64);
    }

    std::uint32_t below32(std::uint32_t n) { return (std::uint32_t)below(n); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

// Deterministic per-replicate stream derivation. Replicate i always sees the
// same stream for a given master seed, independent of how many replicates are
// requested or on which worker it runs.
inline Rng replicate_rng(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(master_seed) ^ (index + 1)));
}

} // namespace fitwave
