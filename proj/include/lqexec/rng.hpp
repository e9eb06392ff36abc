#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace lqexec {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// A draw is a pure function of (key, counter), which is what makes path
/// simulation reproducible regardless of how paths are spread over workers.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter generate(Counter counter, Key key) noexcept;
};

/// Maps 64 random bits to a double in the open interval (0, 1).
inline double to_unit_open(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Two independent standard normals keyed by (seed, stream, index, block).
///
/// `stream` is typically the path index, `index` the time step and `block`
/// distinguishes several pairs drawn at the same step.
std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint32_t index,
                                      std::uint32_t block) noexcept;

}  // namespace lqexec
