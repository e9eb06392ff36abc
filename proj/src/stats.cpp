#include "lqexec/stats.hpp"

#include "lqexec/error.hpp"

#include <cmath>

namespace lqexec {

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

CostEstimate estimate(std::span<const double> samples, std::uint64_t seed) {
    require(!samples.empty(), ErrorKind::configuration, "estimate needs at least one sample");
    const auto n = static_cast<double>(samples.size());
    const double mean = pairwise_sum(samples) / n;
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double e = samples[i] - mean;
        sq[i] = e * e;
    }
    const double var = samples.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n), samples.size(), seed};
}

double combined_se(const CostEstimate& a, const CostEstimate& b) {
    return std::hypot(a.std_error, b.std_error);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::configuration,
            "slope fit needs matching samples");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace lqexec
