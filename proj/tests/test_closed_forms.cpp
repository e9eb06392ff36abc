#include "helpers.hpp"

#include "lqexec/closed_forms.hpp"
#include "lqexec/error.hpp"
#include "lqexec/lambert_w.hpp"
#include "lqexec/paths.hpp"
#include "lqexec/solver.hpp"
#include "lqexec/stats.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace lqexec;

namespace {

ExampleConfig small(Example e, std::size_t n = 200) {
    auto c = default_example(e);
    c.n_steps = n;
    return c;
}

// Max centered-difference residual of dK/ds = -F(s, K) over interior nodes.
template <class KFn>
double riccati_residual(const ModelSpec& spec, KFn K, std::size_t n) {
    const TimeGrid g(spec.grid.t0(), spec.grid.horizon(), n);
    const double h = g.dt();
    double worst = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double s = g.node(i);
        const double dK = (K(s + h) - K(s - h)) / (2.0 * h);
        const double F = riccati_rhs(PointCoefficients::at(spec, s), K(s)).value;
        worst = std::max(worst, std::abs(dK + F));
    }
    return worst;
}

}  // namespace

TEST_CASE("ow_K") {
    CHECK(ow_K(0.0, 1.0, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    for (double lambda : {0.0, 0.3, 2.0}) CHECK(ow_K(1.0, 1.0, lambda, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    for (double s : {0.0, 0.4, 0.9}) CHECK(std::abs(ow_K(s, 1.3, 1e-8, 1.0) - 1.0 / (2.0 + (1.0 - s) * 1.3)) < 1e-6);
    CHECK_THROWS_AS((void)ow_K(0.0, 0.0, 0.0, 1.0), Error);
}

TEST_CASE("Obizhaeva-Wang strategy formula") {
    SUBCASE("deterministic target") {
        auto c = small(Example::ow_deterministic);
        c.xi = {0.25, 0.0};
        Ensemble ens(c.to_spec(), 1, 1);
        const auto b = ens.bundle(0);
        for (std::size_t i = 0; i < c.n_steps; ++i) {
            const double s = ens.model().grid.node(i);
            CHECK(ow_optimal_strategy(i, b, ens.model().grid, c) ==
                  doctest::Approx((c.x - 0.25) * (1.0 + (c.T - s) * c.rho) / (2.0 + c.T * c.rho) + 0.25).epsilon(1e-14));
        }
    }
    SUBCASE("random target at the start") {
        auto c = small(Example::ow_random_target);
        c.xi = {0.1, 0.5};
        c.d = 0.3;
        Ensemble ens(c.to_spec(), 3, 1);
        for (std::size_t p = 0; p < 3; ++p) {
            const double x0 = ow_optimal_strategy(0, ens.bundle(p), ens.model().grid, c);
            CHECK(x0 == doctest::Approx((c.x - 0.1 - 0.3) * (1.0 + c.rho) / (2.0 + c.rho) + 0.1).epsilon(1e-14));
        }
    }
    SUBCASE("agrees with the solver") {
        auto c = small(Example::ow_random_target, 1600);
        c.d = 0.2;
        Ensemble base(c.to_spec(), 30, 5);
        std::vector<double> err;
        for (std::size_t n : {100u, 400u, 1600u}) {
            const auto ens = base.with_steps(n);
            OptimalSolver solver(ens.model_ptr());
            std::vector<double> e;
            for (std::size_t p = 0; p < ens.paths(); ++p) {
                const auto b = ens.bundle(p);
                const auto o = solver.solve(b);
                for (std::size_t i = 0; i < n; ++i) e.push_back(o.Xstar.values[i] - ow_optimal_strategy(i, b, ens.model().grid, c));
            }
            err.push_back(testing::rms(e));
        }
        CHECK(err[0] < 1e-2);
        CHECK(err[2] <= err[0]);
    }
    SUBCASE("penalty is not covered") {
        auto c = small(Example::ow_deterministic);
        c.lambda = 1.0;
        Ensemble ens(c.to_spec(), 1, 1);
        CHECK_THROWS_AS((void)ow_optimal_strategy(0, ens.bundle(0), ens.model().grid, c), Error);
    }
}

TEST_CASE("diffusive resilience closed form") {
    const auto c = small(Example::diffusive_resilience_53, 1000);
    SUBCASE("terminal value through W(x e^x) = x") {
        const double c2 = c.eta * c.eta;
        const double q = (c.rho - 0.5 * c2) / c2;
        CHECK(lambert_w0(q * std::exp(q)) == doctest::Approx(q).epsilon(1e-14));
        CHECK(ex53_K(c.T, c) == doctest::Approx(0.5).epsilon(1e-14));
    }
    SUBCASE("matches the Riccati solver and increases") {
        const auto K = solve_K(c.to_spec());
        CHECK(std::abs(ex53_K(0.0, c) - K.K[0]) < 1e-6);
        for (std::size_t i = 1; i <= c.n_steps; ++i) {
            CHECK(ex53_K(K.grid.node(i), c) >= ex53_K(K.grid.node(i - 1), c));
        }
    }
    SUBCASE("theta") {
        const auto K = solve_K(c.to_spec());
        for (std::size_t i = 0; i <= c.n_steps; i += 50) CHECK(std::abs(ex53_theta(K.grid.node(i), c) - K.theta[i]) < 1e-6);
    }
}

TEST_CASE("cancellation example") {
    SUBCASE("no volatility: constant deviation") {
        auto c = small(Example::cancellation_54);
        c.sigma = c.eta = 0.0;
        Ensemble ens(c.to_spec(), 3, 2);
        const double D0 = ex54_strategy_and_deviation(0, ens.bundle(0), ens.model()).D;
        for (std::size_t p = 0; p < 3; ++p) {
            const auto b = ens.bundle(p);
            for (std::size_t i = 0; i < c.n_steps; ++i) CHECK(ex54_strategy_and_deviation(i, b, ens.model()).D == D0);
        }
    }
    SUBCASE("nothing to do when x = d / gamma0") {
        auto c = small(Example::cancellation_54);
        c.gamma0 = 2.0;
        c.d = 0.5;
        c.x = 0.25;
        Ensemble ens(c.to_spec(), 2, 2);
        const auto b = ens.bundle(1);
        for (std::size_t i = 0; i < c.n_steps; ++i) {
            const auto r = ex54_strategy_and_deviation(i, b, ens.model());
            CHECK(r.X == 0.0);
            CHECK(r.D == 0.0);
        }
    }
    SUBCASE("deterministic strategy, random deviation") {
        const auto c = small(Example::cancellation_54);
        Ensemble ens(c.to_spec(), 500, 2);
        const std::size_t mid = c.n_steps / 2;
        std::vector<double> x, d;
        for (std::size_t p = 0; p < ens.paths(); ++p) {
            const auto r = ex54_strategy_and_deviation(mid, ens.bundle(p), ens.model());
            x.push_back(r.X);
            d.push_back(r.D);
        }
        CHECK(*std::max_element(x.begin(), x.end()) == *std::min_element(x.begin(), x.end()));
        const auto md = estimate(d);
        CHECK(md.std_error > 0.0);
    }
    SUBCASE("parameter constraints") {
        auto c = small(Example::cancellation_54);
        c.eta = 0.2;
        CHECK_THROWS_AS(c.validate(), Error);
    }
}

TEST_CASE("non-existence example") {
    SUBCASE("constant mu reduces to the static form") {
        const TimeGrid g(0.0, 1.0, 200);
        const auto K = ex52_K(g, Coefficient::constant(0.0), 1.5);
        const auto th = ex52_theta(g, Coefficient::constant(0.0), 1.5);
        CHECK(K.back() == 0.5);
        for (std::size_t i = 0; i <= 200; ++i) {
            CHECK(K[i] == doctest::Approx(1.0 / (2.0 + 1.5 * (1.0 - g.node(i)))).epsilon(1e-12));
            CHECK(th[i] == doctest::Approx(K[i]).epsilon(1e-14));
        }
    }
    SUBCASE("matches the Riccati solver on the bridge path") {
        const auto c = small(Example::nonexistence_52, 1000);
        const auto spec = c.to_spec();
        const auto K = solve_K(spec);
        const auto ref = ex52_K(spec.grid, spec.mu, c.rho);
        CHECK(ref.back() == 0.5);
        CHECK(testing::max_abs_diff(K.K, ref) < 1e-5);
        CHECK(testing::max_abs_diff(K.theta, ex52_theta(spec.grid, spec.mu, c.rho)) < 1e-5);
    }
    SUBCASE("variation of theta") {
        const auto c = small(Example::nonexistence_52, 1000);
        const auto mu = c.to_spec().mu;
        const auto smooth = Coefficient::function([](double s) { return 0.5 * std::sin(2.0 * std::numbers::pi * s); }, "sine");
        const TimeGrid g1(0.0, 1.0, 1000), g2(0.0, 1.0, 10000);
        CHECK(total_variation(ex52_theta(g2, mu, c.rho)) >= 2.0 * total_variation(ex52_theta(g1, mu, c.rho)));
        const double s1 = total_variation(ex52_theta(g1, smooth, c.rho));
        const double s2 = total_variation(ex52_theta(g2, smooth, c.rho));
        CHECK(std::abs(s2 - s1) <= 0.1 * s1);
    }
}

TEST_CASE("closed-form K solves the Riccati equation") {
    auto order = [](auto residual) {
        const double r1 = residual(100), r2 = residual(200), r3 = residual(400);
        return loglog_slope(std::vector<double>{1.0 / 100, 1.0 / 200, 1.0 / 400}, std::vector<double>{r1, r2, r3});
    };
    for (double lambda : {0.0, 1.0}) {
        auto c = small(Example::ow_deterministic);
        c.lambda = lambda;
        const auto spec = c.to_spec();
        CHECK(order([&](std::size_t n) {
                  return riccati_residual(spec, [&](double s) { return ow_K(s, c.rho, lambda, c.T); }, n);
              }) >= 1.9);
    }
    {
        const auto c = small(Example::diffusive_resilience_53);
        const auto spec = c.to_spec();
        CHECK(order([&](std::size_t n) { return riccati_residual(spec, [&](double s) { return ex53_K(s, c); }, n); }) >= 1.9);
    }
    {
        auto c = small(Example::nonexistence_52);
        auto spec = c.to_spec();
        spec.mu = Coefficient::function([](double s) { return 0.5 * std::sin(3.0 * s); }, "sine");
        // quadrature on a fine grid, interpolated linearly between its nodes
        const TimeGrid fine(0.0, 1.0, 20000);
        const auto K = ex52_K(fine, spec.mu, c.rho, 1);
        auto Kf = [&](double s) {
            const double pos = s / fine.dt();
            const auto i = std::min<std::size_t>(static_cast<std::size_t>(pos), fine.steps() - 1);
            const double w = pos - static_cast<double>(i);
            return (1.0 - w) * K[i] + w * K[i + 1];
        };
        CHECK(order([&](std::size_t n) { return riccati_residual(spec, Kf, n); }) >= 1.9);
    }
}

TEST_CASE("total variation") {
    CHECK(total_variation({}) == 0.0);
    CHECK(total_variation({1.0, 3.0, 2.0}) == 3.0);
}
