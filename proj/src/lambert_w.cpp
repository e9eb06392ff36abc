#include "lqexec/lambert_w.hpp"

#include "lqexec/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace lqexec {

namespace {

constexpr double kInvE = 1.0 / std::numbers::e;

double initial_guess(double z) {
    if (z < -0.25) {
        // Series at the branch point in p = sqrt(2 (e z + 1)).
        const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * z + 1.0)));
        return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * 11.0 / 72.0));
    }
    if (z < 3.0) return std::log1p(z) * (1.0 - 0.25 * std::log1p(z) / (1.0 + std::log1p(z)));
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double z) {
    if (std::isnan(z)) fail(ErrorKind::domain, "lambert_w0 of NaN");
    if (z < -kInvE) {
        if (z >= -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) return -1.0;
        fail(ErrorKind::domain, "lambert_w0 needs z >= -1/e");
    }
    if (z == 0.0) return 0.0;
    if (std::isinf(z)) return z;
    double w = initial_guess(z);
    for (int it = 0; it < 64; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0) break;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double step = f / denom;
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
    }
    return w;
}

double lambert_w0_of_exp(double log_z) {
    if (log_z < 700.0) return lambert_w0(std::exp(log_z));
    // Solve w + log(w) = log_z by Newton; w > 1 here.
    double w = log_z - std::log(log_z);
    for (int it = 0; it < 64; ++it) {
        const double f = w + std::log(w) - log_z;
        const double step = f / (1.0 + 1.0 / w);
        w -= step;
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * w) break;
    }
    return w;
}

}  // namespace lqexec
