#pragma once

#include <cstdint>
#include <string_view>

namespace cys {

// splitmix64: tiny, portable, and good enough for every stochastic choice in
// this codebase. All randomness is derived from a single global seed so runs
// are reproducible bit-for-bit across platforms and thread counts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [0, n)
    std::uint64_t next_below(std::uint64_t n) {
        // Lemire-style rejection keeps the draw unbiased.
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = (0ULL - n) % n;
            while (lo < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::uint64_t state_;
};

// FNV-1a over a label, used to derive purpose-specific seed streams from the
// global seed (seed for walks, seed for splits, ...).
inline std::uint64_t hash_label(std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    Rng r(seed ^ (salt + 0x632be59bd9b4e019ULL));
    return r.next_u64();
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    return mix_seed(seed, hash_label(label));
}

// Per-task seed for parallel-safe streams: hash(global, a, b) so that the
// serial and parallel schedules draw identical numbers.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(seed, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t a) {
    return mix_seed(derive_seed(seed, label), a);
}

}  // namespace cys
