#pragma once

#include <array>
#include <cstdint>

namespace bsdelab {

// Philox4x32-10 counter-based generator. Stateless: every 128-bit counter maps
// to an independent 128-bit block, so draws can be indexed by
// (stream, path, step, slot) and generated in any order or in parallel.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> counter,
                                              std::array<std::uint32_t, 2> key);
};

// Indexed N(0,1) / U[0,1) field keyed by (seed, stream). Identical coordinates
// always yield identical draws regardless of evaluation order.
class RandomField {
public:
    RandomField(std::uint64_t seed, std::uint32_t stream) noexcept
        : key_{static_cast<std::uint32_t>(seed),
               static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream) {}

    double normal(std::uint32_t path, std::uint32_t step, std::uint32_t slot) const;
    double uniform(std::uint32_t path, std::uint32_t step, std::uint32_t slot) const;

private:
    std::array<std::uint32_t, 2> key_;
    std::uint32_t stream_;
};

} // namespace bsdelab
