#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace lack {

/// Counter-based generator: Philox4x32 with 10 rounds (Salmon et al., SC'11).
///
/// The stream is fully determined by (seed, stream): the 64-bit seed is the
/// Philox key and the stream id occupies the upper half of the 128-bit
/// counter. Every draw consumes one counter block of four 32-bit words;
/// next_u64() packs words 0 and 1 as lo | hi << 32 and discards words 2-3 so
/// that reimplementations only need the block function and this rule.
///
/// Derived draws:
///   uniform()  = (next_u64() >> 11) * 2^-53, in [0, 1)
///   normal()   = Box-Muller on two uniforms (u1 mapped to (0, 1]), returns
///                sqrt(-2 ln u1) * cos(2 pi u2); no caching of the sine half
///   below(n)   = rejection sampling on next_u64() with threshold 2^64 mod n
class Philox {
public:
    static constexpr const char* kName = "philox4x32-10/v1";

    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox(std::uint64_t seed, std::uint64_t stream = 0);

    /// Raw block function, exposed for known-answer testing.
    static Block block(Block counter, Key key);

    std::uint64_t next_u64();
    double uniform();
    double normal();
    std::uint64_t below(std::uint64_t n);

    std::uint64_t draws() const { return counter_lo_; }

private:
    Key key_;
    std::uint64_t stream_;
    std::uint64_t counter_lo_ = 0;
};

}  // namespace lack
