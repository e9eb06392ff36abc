#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace lqexec {

struct CostEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Pairwise summation; the result depends only on the order of `v`.
double pairwise_sum(std::span<const double> v);

/// Sample mean and standard error of the mean.
CostEstimate estimate(std::span<const double> samples, std::uint64_t seed = 0);

/// sqrt(a.std_error^2 + b.std_error^2).
double combined_se(const CostEstimate& a, const CostEstimate& b);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace lqexec
