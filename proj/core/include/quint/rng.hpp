#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace quint {

/// SplitMix64 finalizer: full-avalanche mixing of a 64-bit value.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Reduce a uniform 64-bit value into [0,n) by taking the high 64 bits of the
/// 128-bit product x*n. Relative bias is below n/2^64; no rejection loop, and
/// the result is identical on every platform.
constexpr std::uint64_t reduce_to_range(std::uint64_t x, std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(n)) >> 64);
}

/// Seeded generator with platform-independent output. std::mt19937_64 has a
/// standard-specified sequence; the distributions in <random> do not, so the
/// bounded/uniform draws are implemented here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform in [0,n). n must be nonzero.
    std::uint64_t below(std::uint64_t n) { return reduce_to_range(gen_(), n); }

    /// Uniform double in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Fisher-Yates shuffle using this generator's bounded draw.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace quint
