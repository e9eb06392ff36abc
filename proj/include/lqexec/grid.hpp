#pragma once

#include <cstddef>
#include <optional>

namespace lqexec {

/// Uniform time grid t0 = s_0 < s_1 < ... < s_n = T.
class TimeGrid {
public:
    TimeGrid(double t0, double horizon, std::size_t n_steps);

    [[nodiscard]] double t0() const noexcept { return t0_; }
    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t steps() const noexcept { return n_steps_; }
    [[nodiscard]] std::size_t nodes() const noexcept { return n_steps_ + 1; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] double length() const noexcept { return horizon_ - t0_; }

    /// Node time; the last node is exactly T.
    [[nodiscard]] double node(std::size_t i) const noexcept {
        return i >= n_steps_ ? horizon_ : t0_ + static_cast<double>(i) * dt_;
    }

    [[nodiscard]] TimeGrid with_steps(std::size_t n_steps) const { return {t0_, horizon_, n_steps}; }
    [[nodiscard]] TimeGrid refined(std::size_t factor) const;

    /// Index of the node at time t, if t lies on the grid within tol * dt.
    [[nodiscard]] std::optional<std::size_t> node_index(double t, double tol = 1e-9) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t0_;
    double horizon_;
    std::size_t n_steps_;
    double dt_;
};

}  // namespace lqexec
