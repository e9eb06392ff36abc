#pragma once

#include "lqexec/grid.hpp"
#include "lqexec/model.hpp"
#include "lqexec/paths.hpp"

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace lqexec {

enum class StrategyKind { finite_variation, progressively_measurable };

/// Execution strategy of one path on an n-step grid.
///
/// `values` holds X at nodes 0..n-1, i.e. on [t0, T). The position before t0
/// is `x_pre` and the terminal position is `xi_terminal`. For finite-variation
/// strategies `jumps[k]` is the block trade at node k (jumps[0] = X_0 - x_pre);
/// the rest of X_k - X_{k-1} is continuous trading over the preceding step.
/// The implied terminal block is xi_terminal - X_{n-1}.
struct Strategy {
    StrategyKind kind = StrategyKind::progressively_measurable;
    double x_pre = 0.0;
    std::vector<double> values;
    double xi_terminal = 0.0;
    std::vector<double> jumps;

    static Strategy progressively_measurable(double x_pre, std::vector<double> values, double xi);
    static Strategy finite_variation(double x_pre, std::vector<double> values, std::vector<double> jumps,
                                     double xi);

    [[nodiscard]] std::size_t steps() const noexcept { return values.size(); }
    /// X at node i, with node n mapped to the terminal value.
    [[nodiscard]] double at(std::size_t i) const { return i < values.size() ? values[i] : xi_terminal; }
    [[nodiscard]] double terminal_jump() const { return xi_terminal - values.back(); }
    /// Continuous increment over step k-1 -> k (k >= 1); zero for k = 0 and k = n.
    [[nodiscard]] double continuous_increment(std::size_t k) const;
};

using StrategyFn = std::function<Strategy(const PathBundle&)>;

/// Builds a finite-variation strategy from a continuous schedule c(s) and
/// block trades (time, size): X_s = x + c(s) - c(t0) + sum of blocks up to s.
/// Block times must be grid nodes in [t0, T).
Strategy fv_from_schedule(const TimeGrid& grid, double x, const std::function<double(double)>& continuous,
                          const std::vector<std::pair<double, double>>& blocks, double xi);

enum class DeviationSource { finite_variation, progressively_measurable };

/// D at nodes 0..n (node n includes the terminal block) plus D_{t-} = d.
struct DeviationPath {
    std::vector<double> values;
    std::vector<double> left_limits;  // D_{k-}; only filled by deviation_fv
    double d_pre = 0.0;
    DeviationSource source = DeviationSource::progressively_measurable;
};

struct HiddenDeviationPath {
    std::vector<double> H;
    std::vector<double> Hbar;
    double Hbar_pre = 0.0;
};

DeviationPath deviation_fv(const Strategy& X, const PathBundle& b, const DiscreteModel& m);
DeviationPath deviation_pm(const Strategy& X, const PathBundle& b, const DiscreteModel& m);
HiddenDeviationPath hidden_deviation(const Strategy& X, const DeviationPath& D, const PathBundle& b,
                                     const DiscreteModel& m);

/// Pathwise sum of (D^X - D^Y)^2 / gamma * dt over [t0, T).
double metric_integrand(const Strategy& X, const Strategy& Y, const PathBundle& b, const DiscreteModel& m);

struct MetricEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

/// Monte-Carlo estimate of the strategy metric under common random numbers.
MetricEstimate strategy_metric(const Ensemble& ens, const StrategyFn& X, const StrategyFn& Y);
MetricEstimate metric_from_integrands(const std::vector<double>& integrands);

/// Dyadic piecewise-constant approximation of a control path by a
/// finite-variation strategy (2^level blocks).
Strategy fv_approximate(const std::vector<double>& u, const PathBundle& b, const DiscreteModel& m, int level);

/// Z_s = exp(-int (sigma/2 + eta rbar) dW1 - int eta sqrt(1 - rbar^2) dW2) at nodes.
std::vector<double> z_process(const PathBundle& b, const DiscreteModel& m);

}  // namespace lqexec
