#include "lqexec/lq.hpp"

#include "lqexec/error.hpp"

#include <cmath>

namespace lqexec {

namespace {

void check_control(const std::vector<double>& u, const PathBundle& b) {
    require(u.size() >= b.steps(), ErrorKind::grid_mismatch, "control path does not match the grid");
}

}  // namespace

std::vector<double> integrate_linear_state(const LinearStateCoefficients& c, double h0,
                                           const std::vector<double>& input, const PathBundle& b, double dt) {
    const std::size_t n = b.steps();
    check_control(input, b);
    std::vector<double> H(n + 1);
    H[0] = h0;
    for (std::size_t k = 0; k < n; ++k) {
        const double h = H[k];
        const double u = input[k];
        const double drift = c.h_drift[k] * h + c.c_drift[k] * u + c.drift0[k];
        const double v1 = c.h_vol1[k] * h + c.c_vol1[k] * u + c.vol1_0[k];
        const double v2 = c.h_vol2[k] * h + c.c_vol2[k] * u + c.vol2_0[k];
        H[k + 1] = h + drift * dt + v1 * b.w.dW1[k] + v2 * b.w.dW2[k];
    }
    return H;
}

LinearStateCoefficients htilde_coefficients(const DiscreteModel& m) {
    const std::size_t n = m.steps();
    LinearStateCoefficients c;
    c.h_drift.resize(n);
    c.c_drift.resize(n);
    c.h_vol1.resize(n);
    c.c_vol1.resize(n);
    c.c_vol2.resize(n);
    c.drift0.assign(n, 0.0);
    c.vol1_0.assign(n, 0.0);
    c.h_vol2.assign(n, 0.0);
    c.vol2_0.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = m.sigma[k];
        c.h_drift[k] = 0.5 * (m.mu[k] - 0.25 * s * s);
        c.c_drift[k] = -m.a[k];
        c.h_vol1[k] = 0.5 * s;
        c.c_vol1[k] = -m.vol1[k];
        c.c_vol2[k] = -m.vol2[k];
    }
    return c;
}

LinearStateCoefficients hhat_coefficients(const DiscreteModel& m, const PathBundle& b) {
    LinearStateCoefficients c = htilde_coefficients(m);
    for (std::size_t k = 0; k < m.steps(); ++k) {
        const double r = m.kp.ratio[k];
        const double g = b.sqrt_gamma[k] * b.zeta[k];
        c.h_drift[k] -= r * m.a[k];
        c.drift0[k] = -r * m.a[k] * g;
        c.h_vol1[k] -= r * m.vol1[k];
        c.vol1_0[k] = -r * m.vol1[k] * g;
        c.h_vol2[k] = -r * m.vol2[k];
        c.vol2_0[k] = -r * m.vol2[k] * g;
    }
    return c;
}

std::vector<double> state_Htilde(const std::vector<double>& u, const PathBundle& b, const DiscreteModel& m) {
    return integrate_linear_state(htilde_coefficients(m), m.spec.h0(), u, b, m.dt());
}

std::vector<double> state_Hhat(const std::vector<double>& uhat, const PathBundle& b, const DiscreteModel& m) {
    return integrate_linear_state(hhat_coefficients(m, b), m.spec.h0(), uhat, b, m.dt());
}

std::vector<double> deviation_to_control(const DeviationPath& D, const PathBundle& b) {
    const std::size_t n = b.steps();
    require(D.values.size() == n + 1, ErrorKind::grid_mismatch, "deviation does not match the grid");
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = D.values[k] / b.sqrt_gamma[k];
    return u;
}

std::vector<double> strategy_to_control(const Strategy& X, const PathBundle& b, const DiscreteModel& m) {
    return deviation_to_control(deviation_pm(X, b, m), b);
}

Strategy control_to_strategy(const std::vector<double>& u, const PathBundle& b, const DiscreteModel& m) {
    const auto H0 = state_Htilde(u, b, m);
    const std::size_t n = b.steps();
    std::vector<double> X(n);
    for (std::size_t k = 0; k < n; ++k) X[k] = (u[k] - H0[k]) / b.sqrt_gamma[k];
    return Strategy::progressively_measurable(m.spec.x, std::move(X), b.xi);
}

std::vector<double> remove_cross_terms(const std::vector<double>& u, const std::vector<double>& H,
                                       const PathBundle& b, const DiscreteModel& m) {
    check_control(u, b);
    std::vector<double> out(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
        out[k] = u[k] - m.kp.ratio[k] * (H[k] + b.sqrt_gamma[k] * b.zeta[k]);
    }
    return out;
}

std::vector<double> restore_cross_terms(const std::vector<double>& uhat, const std::vector<double>& H,
                                        const PathBundle& b, const DiscreteModel& m) {
    check_control(uhat, b);
    std::vector<double> out(uhat.size());
    for (std::size_t k = 0; k < uhat.size(); ++k) {
        out[k] = uhat[k] + m.kp.ratio[k] * (H[k] + b.sqrt_gamma[k] * b.zeta[k]);
    }
    return out;
}

}  // namespace lqexec
