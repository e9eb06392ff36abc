#include "lqexec/grid.hpp"

#include "lqexec/error.hpp"

#include <cmath>

namespace lqexec {

TimeGrid::TimeGrid(double t0, double horizon, std::size_t n_steps)
    : t0_(t0), horizon_(horizon), n_steps_(n_steps), dt_(0.0) {
    require(std::isfinite(t0) && std::isfinite(horizon) && horizon > t0, ErrorKind::configuration,
            "time grid needs T > t0");
    require(n_steps >= 1, ErrorKind::configuration, "time grid needs at least one step");
    dt_ = (horizon - t0) / static_cast<double>(n_steps);
}

TimeGrid TimeGrid::refined(std::size_t factor) const {
    require(factor >= 1, ErrorKind::configuration, "refinement factor must be positive");
    return {t0_, horizon_, n_steps_ * factor};
}

std::optional<std::size_t> TimeGrid::node_index(double t, double tol) const {
    const double pos = (t - t0_) / dt_;
    const double idx = std::round(pos);
    if (idx < 0.0 || idx > static_cast<double>(n_steps_) || std::abs(pos - idx) > tol) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(idx);
}

}  // namespace lqexec
