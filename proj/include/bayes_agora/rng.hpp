#pragma once

// Portable deterministic randomness.
//
// Every stream is a SplitMix64 sequence:
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
// Sub-stream seeds are derived with split_seed(), which folds each index into
// the running key through the same finalizer. Any language with 64-bit
// wrapping arithmetic reproduces identical streams from these definitions.

#include <cstdint>
#include <initializer_list>

namespace agora {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// key = mix64(master); for each index i: key = mix64(key + golden_gamma * (i + 1)).
/// Each step is a bijection of key for fixed i, so streams for distinct index
/// tuples of equal length differ unless mix64 collides after the additive step.
constexpr std::uint64_t split_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices) noexcept
{
    std::uint64_t key = mix64(master);
    for (std::uint64_t i : indices)
        key = mix64(key + golden_gamma * (i + 1));
    return key;
}

class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    constexpr result_type operator()() noexcept
    {
        state_ += golden_gamma;
        return mix64(state_);
    }

    /// Uniform integer in [0, bound), bound > 0, by rejection (no modulo bias).
    constexpr std::uint64_t below(std::uint64_t bound) noexcept
    {
        const std::uint64_t limit = max() - max() % bound;
        for (;;) {
            std::uint64_t x = (*this)();
            if (x < limit)
                return x % bound;
        }
    }

    constexpr bool bit() noexcept { return ((*this)() >> 63) != 0; }

private:
    std::uint64_t state_;
};

/// Deterministic fair bit for (seed, agent, time); used by seeded tie-breaking
/// and by the C_u(t) coin.
constexpr int coin_bit(std::uint64_t seed, std::uint64_t agent, std::uint64_t time) noexcept
{
    return static_cast<int>(split_seed(seed, {agent, time}) >> 63);
}

} // namespace agora
