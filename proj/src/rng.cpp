#include "bsdelab/rng.hpp"

#include <cmath>
#include <numbers>

namespace bsdelab {

std::array<std::uint32_t, 4> Philox4x32::block(std::array<std::uint32_t, 4> counter,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t mul0 = 0xD2511F53u, mul1 = 0xCD9E8D57u;
    constexpr std::uint32_t weyl0 = 0x9E3779B9u, weyl1 = 0xBB67AE85u;
    for (int round = 0;; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(mul0) * counter[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(mul1) * counter[2];
        counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        if (round == 9) break;
        key[0] += weyl0;
        key[1] += weyl1;
    }
    return counter;
}

namespace {

// 53-bit mantissa from the high bits of a 64-bit word.
inline double to_unit_open(std::uint64_t bits) {
    // (0, 1]: log() stays finite.
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

inline double to_unit_half_open(std::uint64_t bits) {
    // [0, 1)
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace

double RandomField::normal(std::uint32_t path, std::uint32_t step, std::uint32_t slot) const {
    const auto words = Philox4x32::block({stream_, path, step, slot}, key_);
    const std::uint64_t a =
        (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    const std::uint64_t b =
        (static_cast<std::uint64_t>(words[2]) << 32) | words[3];
    const double u1 = to_unit_open(a);
    const double u2 = to_unit_half_open(b);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RandomField::uniform(std::uint32_t path, std::uint32_t step, std::uint32_t slot) const {
    const auto words = Philox4x32::block({stream_, path, step, slot}, key_);
    const std::uint64_t a =
        (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
    return to_unit_half_open(a);
}

} // namespace bsdelab
