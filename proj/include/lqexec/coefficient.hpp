#pragma once

#include "lqexec/grid.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lqexec {

/// A deterministic, bounded, time-indexed model input (mu, sigma, rho, ...).
///
/// Coefficients are evaluable at arbitrary times so the Riccati solver can
/// work on a grid finer than the simulation grid; the simulation layer only
/// ever sees them through `sample`.
class Coefficient {
public:
    Coefficient() : Coefficient(constant(0.0)) {}

    static Coefficient constant(double value);
    static Coefficient function(std::function<double(double)> f, std::string description);
    /// Linear interpolation through (times[i], values[i]); flat extrapolation.
    static Coefficient piecewise_linear(std::vector<double> times, std::vector<double> values,
                                        std::string description);

    [[nodiscard]] double operator()(double t) const { return constant_ ? *constant_ : f_(t); }
    [[nodiscard]] std::vector<double> sample(const TimeGrid& grid) const;

    [[nodiscard]] bool is_constant() const noexcept { return constant_.has_value(); }
    [[nodiscard]] std::optional<double> constant_value() const noexcept { return constant_; }
    [[nodiscard]] const std::string& description() const noexcept { return description_; }

    /// True if the coefficient vanishes at every node of `grid`.
    [[nodiscard]] bool vanishes_on(const TimeGrid& grid) const;

private:
    Coefficient(std::function<double(double)> f, std::string description);

    std::optional<double> constant_;
    std::function<double(double)> f_;
    std::string description_;
};

/// Deterministic sample path of a Brownian bridge on [t0, T] (zero at both
/// ends), scaled by `amplitude`, shifted by `offset` and clipped to
/// [offset - clip, offset + clip]. The path is generated on `resolution`
/// uniform segments from an auxiliary seed and interpolated linearly between
/// them, so sampling it on grids up to that resolution exhibits the growing
/// variation of a Brownian path.
Coefficient clipped_brownian_bridge(double t0, double horizon, std::size_t resolution,
                                    std::uint64_t seed, double amplitude, double clip,
                                    double offset = 0.0);

}  // namespace lqexec
