#include "lqexec/coefficient.hpp"

#include "lqexec/error.hpp"
#include "lqexec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace lqexec {

Coefficient Coefficient::constant(double value) {
    require(std::isfinite(value), ErrorKind::configuration, "coefficient must be finite");
    Coefficient c = function([value](double) { return value; }, "");
    c.constant_ = value;
    std::ostringstream os;
    os.precision(17);
    os << value;
    c.description_ = os.str();
    return c;
}

Coefficient Coefficient::function(std::function<double(double)> f, std::string description) {
    Coefficient c{std::move(f), std::move(description)};
    return c;
}

Coefficient::Coefficient(std::function<double(double)> f, std::string description)
    : f_(std::move(f)), description_(std::move(description)) {}

Coefficient Coefficient::piecewise_linear(std::vector<double> times, std::vector<double> values,
                                          std::string description) {
    require(!times.empty() && times.size() == values.size(), ErrorKind::configuration,
            "piecewise-linear coefficient needs matching, non-empty knots");
    require(std::is_sorted(times.begin(), times.end()), ErrorKind::configuration,
            "piecewise-linear knots must be increasing");
    auto t = std::make_shared<const std::vector<double>>(std::move(times));
    auto v = std::make_shared<const std::vector<double>>(std::move(values));
    auto f = [t, v](double s) {
        const auto& ts = *t;
        const auto& vs = *v;
        if (s <= ts.front()) return vs.front();
        if (s >= ts.back()) return vs.back();
        const auto it = std::upper_bound(ts.begin(), ts.end(), s);
        const auto j = static_cast<std::size_t>(it - ts.begin());
        const double w = (s - ts[j - 1]) / (ts[j] - ts[j - 1]);
        return vs[j - 1] + w * (vs[j] - vs[j - 1]);
    };
    return function(std::move(f), std::move(description));
}

std::vector<double> Coefficient::sample(const TimeGrid& grid) const {
    std::vector<double> out(grid.nodes());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (*this)(grid.node(i));
        require(std::isfinite(out[i]), ErrorKind::configuration,
                "coefficient '" + description_ + "' is not finite on the grid");
    }
    return out;
}

bool Coefficient::vanishes_on(const TimeGrid& grid) const {
    if (constant_) return *constant_ == 0.0;
    for (std::size_t i = 0; i < grid.nodes(); ++i) {
        if ((*this)(grid.node(i)) != 0.0) return false;
    }
    return true;
}

Coefficient clipped_brownian_bridge(double t0, double horizon, std::size_t resolution,
                                    std::uint64_t seed, double amplitude, double clip,
                                    double offset) {
    require(resolution >= 1, ErrorKind::configuration, "bridge resolution must be positive");
    require(clip > 0.0, ErrorKind::configuration, "bridge clip must be positive");
    const TimeGrid grid(t0, horizon, resolution);
    const double sdt = std::sqrt(grid.dt());
    std::vector<double> w(grid.nodes(), 0.0);
    for (std::size_t i = 0; i < resolution; ++i) {
        w[i + 1] = w[i] + sdt * normal_pair(seed, 0, static_cast<std::uint32_t>(i), 0).first;
    }
    std::vector<double> times(grid.nodes());
    std::vector<double> values(grid.nodes());
    const double wt = w.back();
    for (std::size_t i = 0; i < grid.nodes(); ++i) {
        const double s = grid.node(i);
        const double b = w[i] - (s - t0) / (horizon - t0) * wt;
        times[i] = s;
        values[i] = offset + std::clamp(amplitude * b, -clip, clip);
    }
    values.back() = offset;
    std::ostringstream os;
    os.precision(17);
    os << "bridge:" << seed << ',' << amplitude << ',' << clip << ',' << offset;
    return Coefficient::piecewise_linear(std::move(times), std::move(values), os.str());
}

}  // namespace lqexec
