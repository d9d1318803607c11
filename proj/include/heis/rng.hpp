#pragma once

#include <cstdint>
#include <string_view>

namespace heis {

// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden64 = 0x9e3779b97f4a7c15ULL;

// FNV-1a, used to derive stream keys from names.
inline constexpr std::uint64_t hash_key(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Counter-based generator: the n-th draw of stream (seed, key) is a pure function
// of (seed, key, n), so work can be split across threads without changing results.
class CounterRng {
public:
    using result_type = std::uint64_t;

    constexpr CounterRng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t counter = 0) noexcept
        : base_(mix64(seed ^ mix64(stream + kGolden64))), counter_(counter) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept { return at(counter_++); }
    constexpr result_type at(std::uint64_t n) const noexcept { return mix64(base_ + (n + 1) * kGolden64); }

    // Uniform in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    constexpr std::uint64_t counter() const noexcept { return counter_; }

    // Independent sub-stream, e.g. one per retry or per work item.
    constexpr CounterRng split(std::uint64_t key) const noexcept { return CounterRng(base_, key, 0); }

private:
    std::uint64_t base_;
    std::uint64_t counter_;
};

// Radical inverse in a prime base; components of the Halton sequence.
inline double radical_inverse(std::uint64_t i, unsigned base) noexcept {
    const double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

struct Halton3 {
    double u, v, w;
};

inline Halton3 halton3(std::uint64_t i) noexcept {
    return {radical_inverse(i, 2), radical_inverse(i, 3), radical_inverse(i, 5)};
}

}  // namespace heis
