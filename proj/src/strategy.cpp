#include "lqexec/strategy.hpp"

#include "lqexec/error.hpp"
#include "lqexec/lq.hpp"
#include "lqexec/parallel.hpp"
#include "lqexec/stats.hpp"

#include <cmath>
#include <string>

namespace lqexec {

Strategy Strategy::progressively_measurable(double x_pre, std::vector<double> values, double xi) {
    require(!values.empty(), ErrorKind::configuration, "strategy needs at least one grid value");
    Strategy s;
    s.kind = StrategyKind::progressively_measurable;
    s.x_pre = x_pre;
    s.values = std::move(values);
    s.xi_terminal = xi;
    return s;
}

Strategy Strategy::finite_variation(double x_pre, std::vector<double> values, std::vector<double> jumps,
                                    double xi) {
    require(!values.empty(), ErrorKind::configuration, "strategy needs at least one grid value");
    require(jumps.size() == values.size(), ErrorKind::configuration,
            "finite-variation strategy needs one jump entry per grid value");
    Strategy s;
    s.kind = StrategyKind::finite_variation;
    s.x_pre = x_pre;
    s.xi_terminal = xi;
    jumps[0] = values[0] - x_pre;
    s.values = std::move(values);
    s.jumps = std::move(jumps);
    return s;
}

double Strategy::continuous_increment(std::size_t k) const {
    if (k == 0 || k >= values.size()) return 0.0;
    const double jump = jumps.empty() ? 0.0 : jumps[k];
    return values[k] - values[k - 1] - jump;
}

Strategy fv_from_schedule(const TimeGrid& grid, double x, const std::function<double(double)>& continuous,
                          const std::vector<std::pair<double, double>>& blocks, double xi) {
    const std::size_t n = grid.steps();
    std::vector<double> jumps(n, 0.0);
    for (const auto& [t, size] : blocks) {
        const auto idx = grid.node_index(t);
        if (!idx || *idx >= n) {
            fail(ErrorKind::alignment, "block trade at t=" + std::to_string(t) + " is not a grid node in [t0, T)");
        }
        jumps[*idx] += size;
    }
    std::vector<double> values(n);
    const double c0 = continuous(grid.t0());
    double level = x;
    for (std::size_t k = 0; k < n; ++k) {
        level += jumps[k];
        values[k] = level + continuous(grid.node(k)) - c0;
    }
    return Strategy::finite_variation(x, std::move(values), std::move(jumps), xi);
}

namespace {

void check_lengths(const Strategy& X, const PathBundle& b) {
    require(X.steps() == b.steps(), ErrorKind::grid_mismatch,
            "strategy has " + std::to_string(X.steps()) + " grid values, path has " +
                std::to_string(b.steps()) + " steps");
}

}  // namespace

DeviationPath deviation_fv(const Strategy& X, const PathBundle& b, const DiscreteModel& m) {
    if (X.kind != StrategyKind::finite_variation) {
        fail(ErrorKind::strategy_kind, "deviation_fv needs a finite-variation strategy");
    }
    check_lengths(X, b);
    const std::size_t n = X.steps();
    DeviationPath D;
    D.source = DeviationSource::finite_variation;
    D.d_pre = m.spec.d;
    D.values.resize(n + 1);
    D.left_limits.resize(n + 1);
    D.left_limits[0] = m.spec.d;
    D.values[0] = m.spec.d + b.gamma[0] * X.jumps[0];
    for (std::size_t k = 1; k <= n; ++k) {
        const double dR = b.R[k] - b.R[k - 1];
        const double cont = X.continuous_increment(k);
        const double jump = k < n ? X.jumps[k] : X.terminal_jump();
        D.left_limits[k] = D.values[k - 1] - D.values[k - 1] * dR + b.gamma[k - 1] * cont;
        D.values[k] = D.left_limits[k] + b.gamma[k] * jump;
    }
    return D;
}

DeviationPath deviation_pm(const Strategy& X, const PathBundle& b, const DiscreteModel& m) {
    check_lengths(X, b);
    const std::size_t n = X.steps();
    DeviationPath D;
    D.source = DeviationSource::progressively_measurable;
    D.d_pre = m.spec.d;
    D.values.resize(n + 1);
    double acc = m.spec.d - b.gamma[0] * X.x_pre;
    for (std::size_t i = 0; i <= n; ++i) {
        if (i > 0) acc -= X.values[i - 1] * b.d_nugamma[i - 1];
        D.values[i] = b.gamma[i] * X.at(i) + acc / b.nu[i];
    }
    return D;
}

HiddenDeviationPath hidden_deviation(const Strategy& X, const DeviationPath& D, const PathBundle& b,
                                     const DiscreteModel& m) {
    check_lengths(X, b);
    const std::size_t n = X.steps();
    require(D.values.size() == n + 1, ErrorKind::grid_mismatch, "deviation does not match strategy grid");
    HiddenDeviationPath out;
    out.H.resize(n + 1);
    out.Hbar.resize(n + 1);
    out.Hbar_pre = m.spec.h0();
    for (std::size_t i = 0; i <= n; ++i) {
        const double xi = X.at(i);
        out.H[i] = D.values[i] - b.gamma[i] * xi;
        out.Hbar[i] = D.values[i] / b.sqrt_gamma[i] - b.sqrt_gamma[i] * xi;
    }
    return out;
}

double metric_integrand(const Strategy& X, const Strategy& Y, const PathBundle& b, const DiscreteModel& m) {
    if (X.x_pre != Y.x_pre || X.xi_terminal != Y.xi_terminal) {
        fail(ErrorKind::domain, "metric needs strategies with the same boundary data");
    }
    const auto DX = deviation_pm(X, b, m);
    const auto DY = deviation_pm(Y, b, m);
    double s = 0.0;
    for (std::size_t k = 0; k < X.steps(); ++k) {
        const double diff = DX.values[k] - DY.values[k];
        s += diff * diff / b.gamma[k];
    }
    return s * m.dt();
}

MetricEstimate metric_from_integrands(const std::vector<double>& integrands) {
    const auto est = estimate(integrands);
    MetricEstimate out;
    out.n_paths = est.n_paths;
    out.value = std::sqrt(std::max(est.mean, 0.0));
    out.std_error = out.value > 0.0 ? est.std_error / (2.0 * out.value) : 0.0;
    return out;
}

MetricEstimate strategy_metric(const Ensemble& ens, const StrategyFn& X, const StrategyFn& Y) {
    const auto& m = ens.model();
    const auto values = map_paths(ens.paths(), [&](std::size_t p) {
        const auto b = ens.bundle(p);
        return metric_integrand(X(b), Y(b), b, m);
    });
    return metric_from_integrands(values);
}

std::vector<double> z_process(const PathBundle& b, const DiscreteModel& m) {
    const std::size_t n = b.steps();
    std::vector<double> z(n + 1);
    double acc = 0.0;
    z[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double e = m.eta[k];
        acc += (0.5 * m.sigma[k] + e * m.rbar[k]) * b.w.dW1[k] + m.vol2[k] * b.w.dW2[k];
        z[k + 1] = std::exp(-acc);
    }
    return z;
}

Strategy fv_approximate(const std::vector<double>& u, const PathBundle& b, const DiscreteModel& m, int level) {
    if (level < 0) {
        fail(ErrorKind::domain, "approximation level must be nonnegative");
    }
    const std::size_t n = b.steps();
    require(u.size() >= n, ErrorKind::grid_mismatch, "control does not match the grid");
    require(level < 62, ErrorKind::domain, "approximation level too large");
    const auto z = z_process(b, m);
    const std::size_t blocks = std::size_t{1} << level;
    std::vector<double> v(n, 0.0);
    std::vector<char> boundary(n, 0);
    // Block j covers nodes [j n / 2^level, (j+1) n / 2^level) and carries the
    // value of u / Z at the left end of block j - 1.
    std::size_t prev_start = 0;
    double prev_value = 0.0;
    for (std::size_t j = 0; j < blocks; ++j) {
        const std::size_t lo = j * n / blocks;
        const std::size_t hi = (j + 1) * n / blocks;
        if (lo == hi) continue;
        const double value = j == 0 ? 0.0 : u[prev_start] / z[prev_start];
        for (std::size_t k = lo; k < hi; ++k) v[k] = value;
        if (j > 0 && value != prev_value) boundary[lo] = 1;
        prev_start = lo;
        prev_value = value;
    }
    std::vector<double> un(n);
    for (std::size_t k = 0; k < n; ++k) un[k] = v[k] * z[k];
    Strategy pm = control_to_strategy(un, b, m);
    std::vector<double> jumps(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        if (boundary[k]) jumps[k] = z[k] * (v[k] - v[k - 1]) / b.sqrt_gamma[k];
    }
    return Strategy::finite_variation(pm.x_pre, std::move(pm.values), std::move(jumps), pm.xi_terminal);
}

}  // namespace lqexec
