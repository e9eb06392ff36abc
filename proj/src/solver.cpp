#include "lqexec/solver.hpp"

#include "lqexec/error.hpp"
#include "lqexec/lq.hpp"
#include "lqexec/parallel.hpp"

#include <cmath>
#include <utility>
#include <string>

namespace lqexec {

PointCoefficients PointCoefficients::at(const ModelSpec& spec, double t) {
    PointCoefficients c{};
    c.mu = spec.mu(t);
    c.sigma = spec.sigma(t);
    c.rho = spec.rho(t);
    c.eta = spec.eta(t);
    c.rbar = spec.rbar(t);
    c.lambda = spec.lambda(t);
    c.kappa = 0.5 * (2.0 * c.rho + c.mu - c.sigma * c.sigma - c.eta * c.eta - 2.0 * c.sigma * c.eta * c.rbar);
    c.ratio = KappaPath::ratio_at(c.lambda, c.kappa);
    c.vol1 = c.sigma + c.eta * c.rbar;
    c.vol2 = c.eta * std::sqrt(1.0 - c.rbar * c.rbar);
    c.c2 = c.vol1 * c.vol1 + c.vol2 * c.vol2;
    c.a = c.rho + c.mu - 0.5 * (c.sigma * c.sigma + c.sigma * c.eta * c.rbar);
    return c;
}

RiccatiRhs riccati_rhs(const PointCoefficients& c, double K) {
    const double den = c.lambda + c.kappa + c.c2 * K;
    const double lin = c.mu + c.ratio * (c.ratio * c.c2 - 2.0 * (c.rho + c.mu));
    const double q = (c.rho + c.mu - c.ratio * c.c2) * K;
    return {lin * K + c.ratio * c.kappa - q * q / den, den};
}

namespace {

double theta_at(const PointCoefficients& c, double K, double den) {
    return (c.rho + c.mu - c.ratio * c.c2) * K / den;
}

void check_hypothesis(const ModelSpec& spec, const TimeGrid& fine) {
    double min_lk = INFINITY;
    double min_c2 = INFINITY;
    for (std::size_t i = 0; i < fine.nodes(); ++i) {
        const auto c = PointCoefficients::at(spec, fine.node(i));
        if (c.lambda < 0.0) fail(ErrorKind::model, "lambda must be nonnegative");
        if (c.kappa < -KappaPath::zero_tolerance) fail(ErrorKind::model, "kappa must be nonnegative");
        min_lk = std::min(min_lk, c.lambda + c.kappa);
        min_c2 = std::min(min_c2, c.c2);
    }
    constexpr double eps = 1e-12;
    if (!(min_lk >= eps || min_c2 >= eps)) {
        fail(ErrorKind::model,
             "neither lambda + kappa nor sigma^2 + 2 sigma eta rbar + eta^2 is bounded away from zero");
    }
}

}  // namespace

RiccatiSolution solve_K(const ModelSpec& spec, std::size_t refine) {
    spec.validate();
    require(refine >= 1, ErrorKind::configuration, "refinement factor must be positive");
    const TimeGrid& grid = spec.grid;
    const TimeGrid fine = grid.refined(refine);
    check_hypothesis(spec, fine);

    const std::size_t N = fine.steps();
    const double h = fine.dt();
    std::vector<double> K(N + 1);
    K[N] = 0.5;
    auto F = [&](double t, double k, std::size_t i) {
        const auto r = riccati_rhs(PointCoefficients::at(spec, t), k);
        if (!(r.denominator > 0.0)) {
            const std::size_t node = i / refine;
            fail(ErrorKind::solver,
                 "Riccati denominator is not positive near node " + std::to_string(node), node);
        }
        return r.value;
    };
    for (std::size_t i = N; i > 0; --i) {
        const double t = fine.node(i);
        const double tm = t - 0.5 * h;
        const double tl = fine.node(i - 1);
        const double k1 = F(t, K[i], i);
        const double k2 = F(tm, K[i] + 0.5 * h * k1, i);
        const double k3 = F(tm, K[i] + 0.5 * h * k2, i);
        const double k4 = F(tl, K[i] + h * k3, i - 1);
        K[i - 1] = K[i] + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }

    RiccatiSolution sol{grid, refine, {}, {}, {}, fine, std::move(K), {}, {}};
    sol.theta_fine.resize(N + 1);
    std::vector<double> drift_fine(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        const auto c = PointCoefficients::at(spec, fine.node(i));
        const double den = c.lambda + c.kappa + c.c2 * sol.K_fine[i];
        if (!(den > 0.0)) {
            fail(ErrorKind::solver, "Riccati denominator is not positive near node " + std::to_string(i / refine),
                 i / refine);
        }
        sol.theta_fine[i] = theta_at(c, sol.K_fine[i], den);
        drift_fine[i] = 0.5 * c.mu - c.sigma * c.sigma / 8.0 - c.a * (c.ratio + sol.theta_fine[i]);
    }
    const std::size_t n = grid.steps();
    sol.K.resize(n + 1);
    sol.den.resize(n + 1);
    sol.theta.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        sol.K[i] = sol.K_fine[i * refine];
        const auto c = PointCoefficients::at(spec, grid.node(i));
        sol.den[i] = c.lambda + c.kappa + c.c2 * sol.K[i];
        sol.theta[i] = theta_at(c, sol.K[i], sol.den[i]);
    }
    sol.state_drift_integral.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t j = k * refine; j < (k + 1) * refine; ++j) {
            s += 0.5 * (drift_fine[j] + drift_fine[j + 1]);
        }
        sol.state_drift_integral[k] = s * h;
    }
    return sol;
}

std::vector<double> compute_theta(const RiccatiSolution& K, const ModelSpec& spec) {
    std::vector<double> theta(K.K.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const auto c = PointCoefficients::at(spec, K.grid.node(i));
        theta[i] = theta_at(c, K.K[i], c.lambda + c.kappa + c.c2 * K.K[i]);
    }
    return theta;
}

PsiSolver::PsiSolver(const DiscreteModel& m, const RiccatiSolution& K) : sqrt_gamma0_(std::sqrt(m.spec.gamma0)) {
    require(K.grid == m.grid, ErrorKind::grid_mismatch, "Riccati solution is on a different grid");
    const auto& spec = m.spec;
    const auto& targets = spec.targets;
    const bool lambda_zero = spec.lambda.vanishes_on(K.fine_grid);
    const bool zeta_zero = targets.zeta.kind == ZetaKind::zero ||
                           (targets.zeta.kind == ZetaKind::deterministic && targets.zeta.path.vanishes_on(K.fine_grid));
    if (targets.xi.is_zero() && (lambda_zero || zeta_zero)) {
        vanishes_ = true;
        return;
    }
    const bool in_family = spec.sigma.vanishes_on(K.fine_grid) && spec.eta.vanishes_on(K.fine_grid) &&
                           spec.mu.vanishes_on(K.fine_grid) && spec.rho.is_constant() &&
                           *spec.rho.constant_value() > 0.0 && spec.lambda.is_constant() &&
                           *spec.lambda.constant_value() >= 0.0;
    if (!in_family) {
        fail(ErrorKind::unsupported,
             "psi is only available for nonzero targets when sigma = eta = mu = 0 with constant rho > 0 and "
             "constant lambda >= 0");
    }
    const double rho = *spec.rho.constant_value();
    const double lambda = *spec.lambda.constant_value();
    const double ratio = lambda / (lambda + rho);
    zeta_is_exi_ = targets.zeta.kind == ZetaKind::expected_xi;

    const TimeGrid& fine = K.fine_grid;
    const std::size_t N = fine.steps();
    const double h = fine.dt();
    Gamma_fine_.resize(N + 1);
    double acc = 0.0;
    Gamma_fine_[0] = 1.0;
    for (std::size_t i = 0; i < N; ++i) {
        acc += 0.5 * h * ((ratio + K.theta_fine[i]) + (ratio + K.theta_fine[i + 1]));
        Gamma_fine_[i + 1] = std::exp(-rho * acc);
    }
    // I(s) = int_s^T Gamma_r (1 - K_r) z_r dr with z = zeta (deterministic) or 1 (zeta = E[xi]).
    std::vector<double> I(N + 1, 0.0);
    if (!zeta_zero && !lambda_zero) {
        auto weight = [&](std::size_t i) {
            const double z = zeta_is_exi_ ? 1.0 : targets.zeta.path(fine.node(i));
            return Gamma_fine_[i] * (1.0 - K.K_fine[i]) * z;
        };
        for (std::size_t i = N; i > 0; --i) I[i - 1] = I[i] + 0.5 * h * (weight(i) + weight(i - 1));
    }
    const std::size_t n = m.steps();
    const std::size_t r = K.refine;
    Gamma_.resize(n + 1);
    A_.resize(n + 1);
    B_.resize(n + 1);
    const double gT = Gamma_fine_[N];
    for (std::size_t i = 0; i <= n; ++i) {
        Gamma_[i] = Gamma_fine_[i * r];
        A_[i] = -0.5 * gT / Gamma_[i];
        B_[i] = -rho * ratio * I[i * r] / Gamma_[i];
    }
    A_[n] = -0.5;
}

PsiSolution PsiSolver::solve(const PathBundle& b) const {
    const std::size_t n = b.steps();
    PsiSolution out;
    if (vanishes_) {
        out.psi.assign(n + 1, 0.0);
        return out;
    }
    require(A_.size() == n + 1, ErrorKind::grid_mismatch, "path does not match the psi grid");
    out.Gamma = Gamma_;
    out.psi.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double e = b.exi[i];
        out.psi[i] = sqrt_gamma0_ * (A_[i] * e + B_[i] * (zeta_is_exi_ ? e : 1.0));
    }
    return out;
}

PsiSolution solve_psi(const DiscreteModel& m, const PathBundle& b, const RiccatiSolution& K) {
    return PsiSolver(m, K).solve(b);
}

std::vector<double> compute_theta0(const PsiSolution& psi, const RiccatiSolution& K, const DiscreteModel& m,
                                   const PathBundle& b) {
    const std::size_t n = b.steps();
    std::vector<double> th0(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double g = b.sqrt_gamma[i] * b.zeta[i];
        th0[i] = (m.a[i] * psi.psi[i] + m.kp.ratio[i] * g * m.c2[i] * K.K[i]) / K.den[i];
    }
    return th0;
}

std::vector<double> optimal_state(const DiscreteModel& m, const PathBundle& b, const RiccatiSolution& K,
                                  const std::vector<double>& theta0) {
    require(K.grid == m.grid, ErrorKind::grid_mismatch, "Riccati solution is on a different grid");
    const std::size_t n = b.steps();
    const double dt = m.dt();
    std::vector<double> H(n + 1);
    H[0] = m.spec.h0();
    // Noise forcing enters at the left node (Ito); the dt forcing, net of the
    // covariation with the growth factor, by the trapezoid rule.
    auto loadings = [&](std::size_t k) {
        const double feedback = m.kp.ratio[k] + K.theta[k];
        return std::pair{0.5 * m.sigma[k] - m.vol1[k] * feedback, -m.vol2[k] * feedback};
    };
    auto q_at = [&](std::size_t k) { return theta0[k] - b.sqrt_gamma[k] * b.zeta[k] * m.kp.ratio[k]; };
    auto dt_forcing = [&](std::size_t k) {
        const auto [y1, y2] = loadings(k);
        return q_at(k) * (m.a[k] - y1 * m.vol1[k] - y2 * m.vol2[k]);
    };
    double f_next = dt_forcing(0);
    for (std::size_t k = 0; k < n; ++k) {
        const auto [y1, y2] = loadings(k);
        const double growth = std::exp(K.state_drift_integral[k] - 0.5 * (y1 * y1 + y2 * y2) * dt +
                                       y1 * b.w.dW1[k] + y2 * b.w.dW2[k]);
        const double q = q_at(k);
        const double noise = q * (m.vol1[k] * b.w.dW1[k] + m.vol2[k] * b.w.dW2[k]);
        const double f_now = f_next;
        f_next = dt_forcing(k + 1);
        H[k + 1] = growth * (H[k] + noise + 0.5 * f_now * dt) + 0.5 * f_next * dt;
    }
    return H;
}

OptimalPath optimal_strategy(const DiscreteModel& m, const PathBundle& b, const RiccatiSolution& K,
                             const PsiSolution& psi, const std::vector<double>& theta0) {
    const std::size_t n = b.steps();
    OptimalPath out;
    out.psi = psi;
    out.theta0 = theta0;
    out.Hstar = optimal_state(m, b, K, theta0);
    out.uhat.resize(n);
    std::vector<double> X(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.uhat[k] = K.theta[k] * out.Hstar[k] - theta0[k];
        const double r = m.kp.ratio[k];
        const double g = b.sqrt_gamma[k] * b.zeta[k];
        X[k] = ((K.theta[k] + r - 1.0) * out.Hstar[k] + g * r - theta0[k]) / b.sqrt_gamma[k];
    }
    out.u = restore_cross_terms(out.uhat, out.Hstar, b, m);
    out.Xstar = Strategy::progressively_measurable(m.spec.x, std::move(X), b.xi);

    double c0 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = m.kp.ratio[k];
        const double gz2 = b.gamma[k] * b.zeta[k] * b.zeta[k];
        const double g = b.sqrt_gamma[k] * b.zeta[k];
        c0 += K.K[k] * r * r * gz2 * m.c2[k] + r * m.kp.kappa[k] * gz2 - theta0[k] * theta0[k] * K.den[k] +
              2.0 * r * g * psi.psi[k] * m.a[k];
    }
    out.C0 = 0.5 * b.gamma[n] * b.xi * b.xi + c0 * m.dt();
    const double h0 = m.spec.h0();
    const double d = m.spec.d;
    out.cost_formula = K.K[0] * h0 * h0 - 2.0 * psi.psi[0] * h0 + out.C0 - d * d / (2.0 * m.spec.gamma0);
    return out;
}

OptimalSolver::OptimalSolver(ModelPtr model, std::size_t refine)
    : model_(std::move(model)), K_(solve_K(model_->spec, refine)), psi_(*model_, K_) {}

OptimalPath OptimalSolver::solve(const PathBundle& b) const {
    const auto psi = psi_.solve(b);
    const auto th0 = compute_theta0(psi, K_, *model_, b);
    return optimal_strategy(*model_, b, K_, psi, th0);
}

CostEstimate optimal_cost(const Ensemble& ens, const OptimalSolver& solver) {
    const auto values = map_paths(ens.paths(), [&](std::size_t p) { return solver.solve(ens.bundle(p)).cost_formula; });
    return estimate(values, ens.seed());
}

}  // namespace lqexec
