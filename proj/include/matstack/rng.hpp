#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace matstack {

// splitmix64 finalizer; used to spread seeds and derive per-task streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic sub-stream derivation: hash the root seed with a path of
// indices/tags. Every sampler, pixel shard and dataset sample gets its own
// stream so results are schedule independent.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(seed);
    for (std::uint64_t p : path) h = mix64(h ^ mix64(p));
    return h;
}

// PCG32 (Melissa O'Neill's minimal generator). We avoid <random>
// distributions entirely: their outputs are implementation defined and the
// corpus/loss-log byte-reproducibility contract needs stable streams.
class Pcg32 {
public:
    explicit Pcg32(std::uint64_t seed, std::uint64_t seq = 0xda3e39cb94b95bdbULL) {
        state_ = 0;
        inc_ = (seq << 1u) | 1u;
        next_u32();
        state_ += mix64(seed);
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // [0, 1)
    double uniform() { return next_u32() * 0x1p-32; }

    // [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased-enough integer in [0, n) via 64-bit multiply (Lemire).
    std::uint32_t below(std::uint32_t n) {
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(next_u32()) * n) >> 32);
    }

    // Standard normal via Box-Muller. Always consumes exactly two uniforms
    // (no cached spare), so a stream's state depends only on the draw count.
    double gaussian() {
        double u1 = (static_cast<double>(next_u32()) + 1.0) * 0x1p-32; // (0,1]
        double u2 = next_u32() * 0x1p-32;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t state() const { return state_; }
    std::uint64_t inc() const { return inc_; }
    void restore(std::uint64_t state, std::uint64_t inc) { state_ = state; inc_ = inc; }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

} // namespace matstack
