#include "lqexec/closed_forms.hpp"

#include "lqexec/error.hpp"
#include "lqexec/lambert_w.hpp"

#include <array>
#include <cmath>
#include <string>

namespace lqexec {

std::string_view to_string(Example e) noexcept {
    switch (e) {
        case Example::ow_deterministic: return "ow_deterministic";
        case Example::ow_random_target: return "ow_random_target";
        case Example::nonexistence_52: return "nonexistence_52";
        case Example::diffusive_resilience_53: return "diffusive_resilience_53";
        case Example::cancellation_54: return "cancellation_54";
    }
    return "unknown";
}

const std::vector<Example>& all_examples() noexcept {
    static const std::vector<Example> all{Example::ow_deterministic, Example::ow_random_target,
                                          Example::nonexistence_52, Example::diffusive_resilience_53,
                                          Example::cancellation_54};
    return all;
}

std::optional<Example> example_from_string(std::string_view name) noexcept {
    for (auto e : all_examples()) {
        if (to_string(e) == name) return e;
    }
    return std::nullopt;
}

ExampleConfig default_example(Example e) {
    ExampleConfig c;
    c.which = e;
    switch (e) {
        case Example::ow_deterministic: break;
        case Example::ow_random_target:
            c.xi = {0.0, 0.5};
            break;
        case Example::nonexistence_52:
            c.d = 0.2;
            break;
        case Example::diffusive_resilience_53:
            c.eta = 1.0;
            c.d = 0.2;
            break;
        case Example::cancellation_54:
            c.sigma = 0.5;
            c.eta = 0.5;
            c.rbar = -1.0;
            c.d = 0.2;
            break;
    }
    return c;
}

void ExampleConfig::validate() const {
    auto check = [](bool ok, const std::string& what) { require(ok, ErrorKind::configuration, what); };
    check(gamma0 > 0.0 && T > 0.0 && n_steps >= 1, "example needs gamma0 > 0, T > 0 and a nonempty grid");
    check(std::abs(rbar) <= 1.0, "rbar must lie in [-1, 1]");
    switch (which) {
        case Example::ow_deterministic:
        case Example::ow_random_target:
            check(sigma == 0.0 && eta == 0.0, "Obizhaeva-Wang examples need sigma = eta = 0");
            check(rho > 0.0 && lambda >= 0.0, "Obizhaeva-Wang examples need rho > 0 and lambda >= 0");
            if (which == Example::ow_deterministic) check(!xi.is_random(), "deterministic example needs a constant xi");
            break;
        case Example::nonexistence_52:
            check(sigma == 0.0 && eta == 0.0 && lambda == 0.0 && xi.is_zero() && zeta == ZetaKind::zero,
                  "non-existence example needs sigma = eta = lambda = 0 and zero targets");
            check(2.0 * rho - bridge_clip > 0.0, "non-existence example needs 2 rho + mu bounded away from zero");
            break;
        case Example::diffusive_resilience_53: {
            const double c2 = sigma * sigma + eta * eta + 2.0 * sigma * eta * rbar;
            const double kappa = 0.5 * (2.0 * rho - c2);
            check(lambda == 0.0 && xi.is_zero() && zeta == ZetaKind::zero,
                  "diffusive-resilience example needs lambda = 0 and zero targets");
            check(kappa > 0.0 && c2 > 0.0, "diffusive-resilience example needs kappa > 0 and c2 > 0");
            break;
        }
        case Example::cancellation_54:
            check(rbar == -1.0 && eta == sigma && rho > 0.0, "cancellation example needs rbar = -1, eta = sigma, rho > 0");
            check(lambda == 0.0 && xi.is_zero() && zeta == ZetaKind::zero,
                  "cancellation example needs lambda = 0 and zero targets");
            break;
    }
}

ModelSpec ExampleConfig::to_spec() const {
    validate();
    ModelSpec s;
    s.grid = TimeGrid(0.0, T, n_steps);
    s.mu = which == Example::nonexistence_52
               ? clipped_brownian_bridge(0.0, T, bridge_resolution, bridge_seed, bridge_amplitude, bridge_clip)
               : Coefficient::constant(0.0);
    s.sigma = Coefficient::constant(sigma);
    s.rho = Coefficient::constant(rho);
    s.eta = Coefficient::constant(eta);
    s.rbar = Coefficient::constant(rbar);
    s.lambda = Coefficient::constant(lambda);
    s.gamma0 = gamma0;
    s.targets.xi = xi;
    s.targets.zeta.kind = zeta;
    s.x = x;
    s.d = d;
    return s;
}

double ow_K(double s, double rho, double lambda, double T) {
    require(rho > 0.0 && lambda >= 0.0, ErrorKind::domain, "ow_K needs rho > 0 and lambda >= 0");
    const double tau = T - s;
    if (lambda == 0.0) return 1.0 / (2.0 + tau * rho);
    const double root = std::sqrt(lambda * (rho + lambda));
    const double th = std::tanh(std::sqrt(lambda) * rho * tau / std::sqrt(lambda + rho));
    return 0.5 * (lambda * th + root) / ((0.5 * rho + lambda) * th + root);
}

double ow_theta(double s, double rho, double lambda, double T) {
    return rho / (lambda + rho) * ow_K(s, rho, lambda, T);
}

double ow_Gamma(double s, double rho, double T) { return (2.0 + (T - s) * rho) / (2.0 + T * rho); }

double ow_psi(double s, double rho, double T, double gamma0, double expected_xi) {
    return -std::sqrt(gamma0) * expected_xi / (2.0 + (T - s) * rho);
}

double ow_optimal_strategy(std::size_t i, const PathBundle& b, const TimeGrid& grid, const ExampleConfig& c) {
    require(c.lambda == 0.0 && c.sigma == 0.0 && c.eta == 0.0, ErrorKind::unsupported,
            "closed-form strategy is printed for lambda = 0 only");
    require(i < grid.steps(), ErrorKind::domain, "strategy formula holds on [0, T)");
    const double rho = c.rho;
    const double T = c.T;
    const double s = grid.node(i);
    const double e0 = b.exi[0];
    double x = (c.x - e0 - c.d / c.gamma0) * (1.0 + (T - s) * rho) / (2.0 + T * rho) + e0;
    for (std::size_t k = 0; k < i; ++k) {
        const double r = grid.node(k);
        x += (1.0 + (s - r) * rho) / (2.0 + (T - r) * rho) * (b.exi[k + 1] - b.exi[k]);
    }
    return x;
}

double ex53_K(double s, const ExampleConfig& c) {
    const double c2 = c.sigma * c.sigma + c.eta * c.eta + 2.0 * c.sigma * c.eta * c.rbar;
    const double kappa = 0.5 * (2.0 * c.rho - c2);
    require(kappa > 0.0 && c2 > 0.0, ErrorKind::domain, "ex53_K needs kappa > 0 and c2 > 0");
    const double q = kappa / c2;
    const double cst = std::log(2.0) + (2.0 * kappa + c.rho * c.rho * c.T) / c2;
    const double log_arg = std::log(q) + cst - c.rho * c.rho * s / c2;
    return q / lambert_w0_of_exp(log_arg);
}

double ex53_theta(double s, const ExampleConfig& c) {
    const double c2 = c.sigma * c.sigma + c.eta * c.eta + 2.0 * c.sigma * c.eta * c.rbar;
    const double kappa = 0.5 * (2.0 * c.rho - c2);
    const double K = ex53_K(s, c);
    return c.rho * K / (c2 * K + kappa);
}

StrategyAndDeviation ex54_strategy_and_deviation(std::size_t i, const PathBundle& b, const DiscreteModel& m) {
    const std::size_t n = m.steps();
    require(i < n, ErrorKind::domain, "strategy formula holds on [0, T)");
    for (std::size_t k = 0; k <= n; ++k) {
        require(m.rbar[k] == -1.0 && m.eta[k] == m.sigma[k], ErrorKind::configuration,
                "cancellation example needs rbar = -1 and eta = sigma");
    }
    require(m.spec.rho.is_constant(), ErrorKind::configuration, "cancellation example needs constant rho");
    const double rho = *m.spec.rho.constant_value();
    const double T = m.grid.horizon();
    const double s = m.grid.node(i);
    const double g0 = m.spec.gamma0;
    const double base = m.spec.x - m.spec.d / g0;
    double expo = 0.0;
    for (std::size_t k = 0; k < i; ++k) {
        expo += m.eta[k] * b.w.dW1[k] - 0.5 * m.eta[k] * m.eta[k] * m.dt();
    }
    return {base * (1.0 + (T - s) * rho) / (2.0 + T * rho),
            g0 * base * (1.0 + T * rho) / (2.0 + T * rho) * std::exp(expo)};
}

namespace {

struct Ex52Fine {
    TimeGrid fine;
    std::vector<double> mu, K, theta;
};

Ex52Fine ex52_fine(const TimeGrid& grid, const Coefficient& mu, double rho, std::size_t refine) {
    Ex52Fine out{grid.refined(refine), {}, {}, {}};
    const std::size_t N = out.fine.steps();
    const double h = out.fine.dt();
    out.mu = mu.sample(out.fine);
    for (std::size_t i = 0; i <= N; ++i) {
        require(2.0 * rho + out.mu[i] > 0.0, ErrorKind::domain, "ex52 needs 2 rho + mu > 0");
    }
    // M(s) = int_s^T mu, inner(s) = int_s^T f(r) exp(M(r)) dr.
    std::vector<double> M(N + 1, 0.0);
    for (std::size_t i = N; i > 0; --i) M[i - 1] = M[i] + 0.5 * h * (out.mu[i] + out.mu[i - 1]);
    auto integrand = [&](std::size_t i) {
        const double num = rho + out.mu[i];
        return 2.0 * num * num / (2.0 * rho + out.mu[i]) * std::exp(M[i]);
    };
    std::vector<double> inner(N + 1, 0.0);
    for (std::size_t i = N; i > 0; --i) inner[i - 1] = inner[i] + 0.5 * h * (integrand(i) + integrand(i - 1));
    out.K.resize(N + 1);
    out.theta.resize(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        out.K[i] = std::exp(M[i]) / (inner[i] + 2.0);
        out.theta[i] = 2.0 * (rho + out.mu[i]) * out.K[i] / (2.0 * rho + out.mu[i]);
    }
    return out;
}

std::vector<double> at_nodes(const std::vector<double>& fine, std::size_t n, std::size_t refine) {
    std::vector<double> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) out[i] = fine[i * refine];
    return out;
}

}  // namespace

std::vector<double> ex52_K(const TimeGrid& grid, const Coefficient& mu, double rho, std::size_t refine) {
    return at_nodes(ex52_fine(grid, mu, rho, refine).K, grid.steps(), refine);
}

std::vector<double> ex52_theta(const TimeGrid& grid, const Coefficient& mu, double rho, std::size_t refine) {
    return at_nodes(ex52_fine(grid, mu, rho, refine).theta, grid.steps(), refine);
}

std::vector<double> ex52_state(const TimeGrid& grid, const Coefficient& mu, double rho, double h0,
                               std::size_t refine) {
    const auto f = ex52_fine(grid, mu, rho, refine);
    const std::size_t N = f.fine.steps();
    const double h = f.fine.dt();
    std::vector<double> state(N + 1);
    double acc = 0.0;
    state[0] = h0;
    auto rate = [&](std::size_t i) { return 0.5 * f.mu[i] - (rho + f.mu[i]) * f.theta[i]; };
    for (std::size_t i = 0; i < N; ++i) {
        acc += 0.5 * h * (rate(i) + rate(i + 1));
        state[i + 1] = h0 * std::exp(acc);
    }
    return at_nodes(state, grid.steps(), refine);
}

double total_variation(const std::vector<double>& v) {
    double tv = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) tv += std::abs(v[i] - v[i - 1]);
    return tv;
}

}  // namespace lqexec
