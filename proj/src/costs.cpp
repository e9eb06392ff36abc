#include "lqexec/costs.hpp"

#include "lqexec/error.hpp"
#include "lqexec/parallel.hpp"

namespace lqexec {

double risk_term(const Strategy& X, const PathBundle& b, const DiscreteModel& m) {
    double s = 0.0;
    for (std::size_t k = 0; k < X.steps(); ++k) {
        if (m.lambda[k] == 0.0) continue;
        const double e = X.values[k] - b.zeta[k];
        s += m.lambda[k] * b.gamma[k] * e * e;
    }
    return s * m.dt();
}

double trading_cost_fv(const Strategy& X, const DeviationPath& D, const PathBundle& b) {
    require(!D.left_limits.empty(), ErrorKind::strategy_kind, "trading cost needs a finite-variation deviation");
    const std::size_t n = X.steps();
    double s = D.left_limits[0] * X.jumps[0] + 0.5 * b.gamma[0] * X.jumps[0] * X.jumps[0];
    for (std::size_t k = 1; k <= n; ++k) {
        const double cont = X.continuous_increment(k);
        const double jump = k < n ? X.jumps[k] : X.terminal_jump();
        // Continuous trading over a step is priced as a small block at its left end.
        s += (D.values[k - 1] + 0.5 * b.gamma[k - 1] * cont) * cont + D.left_limits[k] * jump +
             0.5 * b.gamma[k] * jump * jump;
    }
    return s;
}

double trading_cost_identity_rhs(const DeviationPath& D, const PathBundle& b, const DiscreteModel& m) {
    const std::size_t n = b.steps();
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double w_next = 1.0 / (b.nu[k + 1] * b.nu[k + 1] * b.gamma[k + 1]);
        const double w_now = 1.0 / (b.nu[k] * b.nu[k] * b.gamma[k]);
        s += D.values[k] * D.values[k] * b.nu[k] * b.nu[k] * (w_next - w_now);
    }
    const double d = m.spec.d;
    return 0.5 * (D.values[n] * D.values[n] / b.gamma[n] - d * d / b.gamma[0] - s);
}

double cost_fv(const Strategy& X, const DeviationPath& D, const PathBundle& b, const DiscreteModel& m) {
    if (X.kind != StrategyKind::finite_variation) {
        fail(ErrorKind::strategy_kind, "cost_fv needs a finite-variation strategy");
    }
    return trading_cost_fv(X, D, b) + risk_term(X, b, m);
}

double cost_fv(const Strategy& X, const PathBundle& b, const DiscreteModel& m) {
    if (X.kind != StrategyKind::finite_variation) {
        fail(ErrorKind::strategy_kind, "cost_fv needs a finite-variation strategy");
    }
    return cost_fv(X, deviation_fv(X, b, m), b, m);
}

double cost_pm(const Strategy& X, const DeviationPath& D, const PathBundle& b, const DiscreteModel& m) {
    const std::size_t n = X.steps();
    require(D.values.size() == n + 1, ErrorKind::grid_mismatch, "deviation does not match strategy grid");
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        s += D.values[k] * D.values[k] / b.gamma[k] * 2.0 * m.kp.kappa[k];
    }
    const double d = m.spec.d;
    return 0.5 * (D.values[n] * D.values[n] / b.gamma[n] + s * m.dt()) - d * d / (2.0 * b.gamma[0]) +
           risk_term(X, b, m);
}

double cost_pm(const Strategy& X, const PathBundle& b, const DiscreteModel& m) {
    return cost_pm(X, deviation_pm(X, b, m), b, m);
}

double cost_pm_quadratic(const DeviationPath& D, const HiddenDeviationPath& H, const PathBundle& b,
                         const DiscreteModel& m) {
    const std::size_t n = b.steps();
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = m.lambda[k];
        const double w = D.values[k] / b.sqrt_gamma[k];
        const double y = H.Hbar[k] + b.sqrt_gamma[k] * b.zeta[k];
        s += (2.0 * m.kp.kappa[k] + 2.0 * lam) * w * w + 2.0 * lam * y * y - 4.0 * lam * y * w;
    }
    const double term = H.Hbar[n] + b.sqrt_gamma[n] * b.xi;
    const double d = m.spec.d;
    return 0.5 * (term * term + s * m.dt()) - d * d / (2.0 * b.gamma[0]);
}

double cost_J(const std::vector<double>& u, const std::vector<double>& H, const PathBundle& b,
              const DiscreteModel& m) {
    const std::size_t n = b.steps();
    require(u.size() >= n && H.size() == n + 1, ErrorKind::grid_mismatch, "control or state does not match the grid");
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lam = m.lambda[k];
        const double y = H[k] + b.sqrt_gamma[k] * b.zeta[k];
        s += (2.0 * m.kp.kappa[k] + 2.0 * lam) * u[k] * u[k] + 2.0 * lam * y * y - 4.0 * lam * y * u[k];
    }
    const double term = H[n] + b.sqrt_gamma[n] * b.xi;
    return 0.5 * (term * term + s * m.dt());
}

double cost_Jhat(const std::vector<double>& uhat, const std::vector<double>& H, const PathBundle& b,
                 const DiscreteModel& m) {
    const std::size_t n = b.steps();
    require(uhat.size() >= n && H.size() == n + 1, ErrorKind::grid_mismatch,
            "control or state does not match the grid");
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double kap = m.kp.kappa[k];
        const double y = H[k] + b.sqrt_gamma[k] * b.zeta[k];
        s += m.kp.ratio[k] * kap * y * y + (m.lambda[k] + kap) * uhat[k] * uhat[k];
    }
    const double term = H[n] + b.sqrt_gamma[n] * b.xi;
    return 0.5 * term * term + s * m.dt();
}

std::vector<double> pathwise(const Ensemble& ens, const std::function<double(const PathBundle&)>& f) {
    return map_paths(ens.paths(), [&](std::size_t p) { return f(ens.bundle(p)); });
}

CostEstimate monte_carlo(const Ensemble& ens, const std::function<double(const PathBundle&)>& f) {
    const auto values = pathwise(ens, f);
    return estimate(values, ens.seed());
}

}  // namespace lqexec
