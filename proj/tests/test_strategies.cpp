#include "helpers.hpp"

#include "lqexec/error.hpp"
#include "lqexec/lq.hpp"
#include "lqexec/paths.hpp"
#include "lqexec/stats.hpp"
#include "lqexec/strategy.hpp"

#include <doctest.h>

#include <cmath>

using namespace lqexec;
using testing::make_spec;
using testing::Params;

namespace {

Strategy constant_fv(std::size_t n, double x, double level, double xi) {
    std::vector<double> v(n, level);
    std::vector<double> j(n, 0.0);
    return Strategy::finite_variation(x, v, j, xi);
}

Params stochastic_params() {
    Params p;
    p.mu = 0.1;
    p.sigma = 0.3;
    p.rho = 1.0;
    p.eta = 0.5;
    p.rbar = -0.3;
    p.d = 0.2;
    return p;
}

}  // namespace

TEST_CASE("deviation_fv: initial block") {
    Params p;
    p.gamma0 = 2.0;
    Ensemble ens(make_spec(p), 1, 1);
    const auto b = ens.bundle(0);
    const auto D = deviation_fv(constant_fv(p.n, 1.0, 0.0, 0.0), b, ens.model());
    CHECK(D.left_limits[0] == 0.0);
    CHECK(D.values[0] == -2.0);
}

TEST_CASE("deviation_fv: no trading decays exponentially") {
    Params p;
    p.rho = 1.5;
    p.d = 0.3;
    p.n = 1000;
    Ensemble ens(make_spec(p), 1, 1);
    const auto D = deviation_fv(constant_fv(p.n, 1.0, 1.0, 1.0), ens.bundle(0), ens.model());
    std::vector<double> exact(p.n + 1);
    for (std::size_t i = 0; i <= p.n; ++i) exact[i] = 0.3 * std::exp(-1.5 * ens.model().grid.node(i));
    CHECK(testing::max_abs_diff(D.values, exact) < ens.model().dt());
}

TEST_CASE("deviation_fv: no trading with diffusive resilience converges to d / nu") {
    Params p = stochastic_params();
    p.n = 1600;
    Ensemble base(make_spec(p), 40, 3);
    std::vector<double> err;
    for (std::size_t n : {100u, 400u, 1600u}) {
        const auto ens = base.with_steps(n);
        std::vector<double> e;
        for (std::size_t i = 0; i < ens.paths(); ++i) {
            const auto b = ens.bundle(i);
            const auto D = deviation_fv(constant_fv(n, 1.0, 1.0, 1.0), b, ens.model());
            for (std::size_t k = 0; k <= n; ++k) e.push_back(D.values[k] - p.d / b.nu[k]);
        }
        err.push_back(testing::rms(e));
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
    CHECK(err[2] < 0.5 * err[0]);
}

TEST_CASE("deviation_fv rejects progressively measurable strategies") {
    Params p;
    Ensemble ens(make_spec(p), 1, 1);
    const auto X = Strategy::progressively_measurable(1.0, std::vector<double>(p.n, 0.0), 0.0);
    try {
        (void)deviation_fv(X, ens.bundle(0), ens.model());
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::strategy_kind);
    }
}

TEST_CASE("deviation_pm: zero strategy") {
    Params p = stochastic_params();
    p.x = 0.0;
    p.d = 0.0;
    Ensemble ens(make_spec(p), 2, 1);
    const auto X = Strategy::progressively_measurable(0.0, std::vector<double>(p.n, 0.0), 0.0);
    for (double v : deviation_pm(X, ens.bundle(1), ens.model()).values) CHECK(v == 0.0);
}

TEST_CASE("deviation_pm agrees with deviation_fv under refinement") {
    Params p = stochastic_params();
    p.n = 2000;
    Ensemble base(make_spec(p), 40, 17);
    std::vector<double> dts, errs;
    for (std::size_t n : {250u, 500u, 1000u, 2000u}) {
        const auto ens = base.with_steps(n);
        std::vector<double> e;
        for (std::uint64_t s = 0; s < 5; ++s) {
            const auto r = testing::RandomFv::draw(s, p.T);
            for (std::size_t i = 0; i < ens.paths(); ++i) {
                const auto b = ens.bundle(i);
                const auto X = r.build(ens.model().grid, p.x, 0.0);
                const auto Df = deviation_fv(X, b, ens.model());
                const auto Dp = deviation_pm(X, b, ens.model());
                for (std::size_t k = 0; k <= n; ++k) e.push_back(Df.values[k] - Dp.values[k]);
            }
        }
        dts.push_back(1.0 / static_cast<double>(n));
        errs.push_back(testing::rms(e));
    }
    CHECK(loglog_slope(dts, errs) >= 0.4);
}

TEST_CASE("deviation_pm: constant offsets differ by a decaying exponential") {
    Params p;
    p.rho = 0.8;
    p.gamma0 = 1.7;
    p.n = 1000;
    Ensemble ens(make_spec(p), 1, 1);
    const auto b = ens.bundle(0);
    const auto X = Strategy::progressively_measurable(1.0, std::vector<double>(p.n, 0.6), 0.0);
    const auto Y = Strategy::progressively_measurable(1.0, std::vector<double>(p.n, -0.4), 0.0);
    const auto DX = deviation_pm(X, b, ens.model());
    const auto DY = deviation_pm(Y, b, ens.model());
    for (std::size_t i = 0; i < p.n; ++i) {
        const double exact = 1.7 * 1.0 * std::exp(-0.8 * ens.model().grid.node(i));
        CHECK(std::abs(DX.values[i] - DY.values[i] - exact) < 2.0 * ens.model().dt());
    }
}

TEST_CASE("hidden deviation") {
    SUBCASE("full initial block gives H = D") {
        Params p;
        Ensemble ens(make_spec(p), 1, 1);
        const auto b = ens.bundle(0);
        const auto X = constant_fv(p.n, 1.0, 0.0, 0.0);
        const auto D = deviation_fv(X, b, ens.model());
        const auto H = hidden_deviation(X, D, b, ens.model());
        CHECK(H.H == D.values);
    }
    SUBCASE("immediate close leaves no hidden deviation") {
        Params p;
        p.gamma0 = 2.0;
        p.d = 0.4;
        p.x = 0.2;
        Ensemble ens(make_spec(p), 1, 1);
        const auto b = ens.bundle(0);
        const auto X = constant_fv(p.n, p.x, 0.0, 0.0);
        const auto H = hidden_deviation(X, deviation_fv(X, b, ens.model()), b, ens.model());
        CHECK(H.Hbar_pre == doctest::Approx(0.0));
        for (double h : H.Hbar) CHECK(std::abs(h) < 1e-15);
    }
    SUBCASE("initial value") {
        Params p = stochastic_params();
        p.gamma0 = 3.0;
        Ensemble ens(make_spec(p), 1, 1);
        const auto b = ens.bundle(0);
        const auto X = testing::RandomFv::draw(4, 1.0).build(ens.model().grid, p.x, 0.0);
        const auto H = hidden_deviation(X, deviation_fv(X, b, ens.model()), b, ens.model());
        CHECK(H.Hbar_pre == doctest::Approx(p.d / std::sqrt(3.0) - std::sqrt(3.0) * p.x));
    }
    SUBCASE("unchanged across a node jump") {
        Params p = stochastic_params();
        Ensemble ens(make_spec(p), 4, 2);
        for (std::size_t i = 0; i < ens.paths(); ++i) {
            const auto b = ens.bundle(i);
            const auto X = testing::RandomFv::draw(i, 1.0).build(ens.model().grid, p.x, 0.0);
            const auto D = deviation_fv(X, b, ens.model());
            const auto H = hidden_deviation(X, D, b, ens.model());
            for (std::size_t k = 0; k < p.n; ++k) {
                const double x_left = k == 0 ? X.x_pre : X.values[k] - X.jumps[k];
                const double hbar_left = D.left_limits[k] / b.sqrt_gamma[k] - b.sqrt_gamma[k] * x_left;
                CHECK(std::abs(H.Hbar[k] - hbar_left) < 1e-13);
            }
        }
    }
    SUBCASE("depends on the strategy only through earlier nodes") {
        Params p = stochastic_params();
        Ensemble ens(make_spec(p), 1, 9);
        const auto b = ens.bundle(0);
        std::vector<double> v(p.n, 0.5);
        const auto X = Strategy::progressively_measurable(p.x, v, 0.0);
        v[37] += 3.0;
        const auto Y = Strategy::progressively_measurable(p.x, v, 0.0);
        const auto HX = hidden_deviation(X, deviation_pm(X, b, ens.model()), b, ens.model());
        const auto HY = hidden_deviation(Y, deviation_pm(Y, b, ens.model()), b, ens.model());
        for (std::size_t k = 0; k <= 37; ++k) CHECK(std::abs(HX.Hbar[k] - HY.Hbar[k]) < 1e-14);
    }
}

TEST_CASE("jump identity holds at every node") {
    Params p = stochastic_params();
    Ensemble ens(make_spec(p), 20, 5);
    for (std::size_t i = 0; i < ens.paths(); ++i) {
        const auto b = ens.bundle(i);
        const auto X = testing::RandomFv::draw(100 + i, 1.0).build(ens.model().grid, p.x, 0.3);
        const auto D = deviation_fv(X, b, ens.model());
        for (std::size_t k = 0; k <= p.n; ++k) {
            const double jump = k < p.n ? X.jumps[k] : X.terminal_jump();
            CHECK(std::abs(D.values[k] - D.left_limits[k] - b.gamma[k] * jump) < 1e-10);
        }
    }
}

TEST_CASE("block trades must sit on grid nodes in [t0, T)") {
    const TimeGrid g(0.0, 1.0, 10);
    auto c = [](double) { return 0.0; };
    CHECK_NOTHROW((void)fv_from_schedule(g, 1.0, c, {{0.3, -0.5}}, 0.0));
    for (double t : {0.35, 1.0}) {
        try {
            (void)fv_from_schedule(g, 1.0, c, {{t, -0.5}}, 0.0);
            FAIL("expected an alignment error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::alignment);
        }
    }
}

TEST_CASE("strategy metric") {
    Params p;
    p.rho = 1.0;
    p.gamma0 = 1.3;
    p.n = 1000;
    Ensemble ens(make_spec(p), 8, 3);
    auto level = [&](double a) {
        return [a, n = p.n](const PathBundle&) { return Strategy::progressively_measurable(1.0, std::vector<double>(n, a), 0.0); };
    };
    SUBCASE("identity and symmetry") {
        CHECK(strategy_metric(ens, level(0.3), level(0.3)).value == 0.0);
        CHECK(strategy_metric(ens, level(0.3), level(-1.0)).value == strategy_metric(ens, level(-1.0), level(0.3)).value);
    }
    SUBCASE("constant offsets") {
        const double exact = std::sqrt(1.3 * 0.25 * (1.0 - std::exp(-2.0)) / 2.0);
        const auto m = strategy_metric(ens, level(0.7), level(0.2));
        CHECK(m.std_error == doctest::Approx(0.0));
        CHECK(m.value == doctest::Approx(exact).epsilon(2e-3));
    }
    SUBCASE("mismatched boundary data") {
        auto other = [n = p.n](const PathBundle&) { return Strategy::progressively_measurable(2.0, std::vector<double>(n, 0.0), 0.0); };
        try {
            (void)strategy_metric(ens, level(0.0), other);
            FAIL("expected a domain error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::domain);
        }
    }
}

TEST_CASE("fv_approximate recovers a multiple of Z after the first block") {
    Params p = stochastic_params();
    p.n = 256;
    Ensemble ens(make_spec(p), 3, 4);
    for (std::size_t i = 0; i < ens.paths(); ++i) {
        const auto b = ens.bundle(i);
        const auto z = z_process(b, ens.model());
        std::vector<double> u(p.n);
        for (std::size_t k = 0; k < p.n; ++k) u[k] = -0.7 * z[k];
        for (int level : {1, 3, 5}) {
            const auto X = fv_approximate(u, b, ens.model(), level);
            CHECK(X.kind == StrategyKind::finite_variation);
            const std::size_t first = p.n >> level;
            std::vector<double> expected = u;
            for (std::size_t k = 0; k < first; ++k) expected[k] = 0.0;
            const auto Y = control_to_strategy(expected, b, ens.model());
            CHECK(testing::max_abs_diff(X.values, Y.values) < 1e-12);
            // the deviation of X reproduces the control up to discretization
            const auto back = strategy_to_control(X, b, ens.model());
            CHECK(testing::max_abs_diff(back, expected) < 0.02);
        }
    }
    try {
        (void)fv_approximate(std::vector<double>(p.n, 0.0), ens.bundle(0), ens.model(), -1);
        FAIL("expected a domain error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::domain);
    }
}

TEST_CASE("z_process starts at one and is deterministic without noise") {
    Params p;
    Ensemble ens(make_spec(p), 1, 1);
    const auto z = z_process(ens.bundle(0), ens.model());
    for (double v : z) CHECK(v == 1.0);
}
