#pragma once

#include <array>
#include <cstdint>

namespace usdeconv {

/// Deterministic pseudo-random stream (xoshiro256++). A stream is identified
/// by (seed, stream_id); the stream id selects one of 2^128 non-overlapping
/// subsequences via the generator's jump polynomial, so parallel chains can
/// draw independently from a single user seed.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        // splitmix64 expansion of the seed into the 256-bit state
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
        bool all_zero = true;
        for (auto w : state_) all_zero = all_zero && w == 0;
        if (all_zero) state_[0] = 0x9e3779b97f4a7c15ULL;
        for (std::uint64_t i = 0; i < stream_id; ++i) jump();
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

    /// Uniform double in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in the open interval (0, 1); safe as a log() argument.
    double next_open() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    // Advances 2^128 steps; from the xoshiro256++ reference implementation.
    void jump() {
        static constexpr std::uint64_t kJump[] = {0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
                                                  0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
        std::uint64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;
        for (std::uint64_t word : kJump)
            for (int b = 0; b < 64; ++b) {
                if (word & (1ULL << b)) {
                    s0 ^= state_[0];
                    s1 ^= state_[1];
                    s2 ^= state_[2];
                    s3 ^= state_[3];
                }
                next_u64();
            }
        state_ = {s0, s1, s2, s3};
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
};

} // namespace usdeconv
