#pragma once

#include <cstdint>
#include <limits>

namespace mhwalk {

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** with splitmix64 seeding. Hand-rolled so that seeded output
// is identical across standard libraries and platforms.
class Rng {
public:
    using result_type = uint64_t;

    explicit Rng(uint64_t seed = 0) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<uint64_t>::max(); }

    uint64_t operator()() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, n). Lemire's multiply-shift with rejection.
    uint32_t uniform_index(uint32_t n) {
        uint64_t x = (*this)() >> 32;
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<uint64_t>(m & 0xffffffffULL);
        if (lo < n) {
            uint64_t threshold = (0x100000000ULL - n) % n;
            while (lo < threshold) {
                x = (*this)() >> 32;
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<uint64_t>(m & 0xffffffffULL);
            }
        }
        return static_cast<uint32_t>(m >> 32);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform_real() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

// Independent stream per walker, derived from (seed, start node, walk index).
inline Rng walker_stream(uint64_t seed, uint64_t node, uint64_t k) {
    uint64_t sm = seed;
    uint64_t a = splitmix64(sm);
    sm ^= node * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL;
    uint64_t b = splitmix64(sm);
    sm ^= k * 0xbf58476d1ce4e5b9ULL + 0x1ce4e5b9ULL;
    uint64_t c = splitmix64(sm);
    return Rng(a ^ (b + c));
}

} // namespace mhwalk
