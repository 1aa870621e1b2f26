#pragma once

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw; SC'11).
// Output is a pure function of (counter, key): any draw can be produced
// independently, which is what makes simulation shards reproducible.

#include <array>
#include <cstdint>

namespace optsamp {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr Counter generate(Counter ctr, Key key) noexcept {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            ctr = single_round(ctr, key);
        }
        return ctr;
    }

    static constexpr Key key_from_seed(std::uint64_t seed) noexcept {
        return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    }

    /// Uniform double in the open interval (0, 1) from the first two output words.
    static constexpr double to_open_unit(const Counter& out) noexcept {
        const std::uint64_t bits =
            ((static_cast<std::uint64_t>(out[0]) << 32) | out[1]) >> 12;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

}  // namespace optsamp
