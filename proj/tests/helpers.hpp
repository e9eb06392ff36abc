#pragma once

#include "lqexec/model.hpp"
#include "lqexec/strategy.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace lqexec::testing {

struct Params {
    double T = 1.0;
    std::size_t n = 100;
    double mu = 0.0, sigma = 0.0, rho = 1.0, eta = 0.0, rbar = 0.0, lambda = 0.0;
    double gamma0 = 1.0, x = 1.0, d = 0.0;
    TerminalTarget xi{};
    ZetaKind zeta = ZetaKind::zero;
    double zeta_const = 0.0;
};

inline ModelSpec make_spec(const Params& p) {
    ModelSpec s;
    s.grid = TimeGrid(0.0, p.T, p.n);
    s.mu = Coefficient::constant(p.mu);
    s.sigma = Coefficient::constant(p.sigma);
    s.rho = Coefficient::constant(p.rho);
    s.eta = Coefficient::constant(p.eta);
    s.rbar = Coefficient::constant(p.rbar);
    s.lambda = Coefficient::constant(p.lambda);
    s.gamma0 = p.gamma0;
    s.targets.xi = p.xi;
    s.targets.zeta.kind = p.zeta;
    if (p.zeta == ZetaKind::deterministic) s.targets.zeta.path = Coefficient::constant(p.zeta_const);
    s.x = p.x;
    s.d = p.d;
    return s;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double rms(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

/// Smooth schedule plus a few block trades at multiples of T/10, so the same
/// strategy is representable on every grid with n divisible by 10.
struct RandomFv {
    double alpha, beta, freq;
    std::vector<std::pair<double, double>> blocks;

    static RandomFv draw(std::uint64_t seed, double T) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        std::uniform_int_distribution<int> slot(0, 9);
        RandomFv r{U(rng), U(rng), 1.0 + 2.0 * std::abs(U(rng)), {}};
        for (int j = 0; j < 3; ++j) r.blocks.emplace_back(T * slot(rng) / 10.0, 0.5 * U(rng));
        return r;
    }

    [[nodiscard]] Strategy build(const TimeGrid& g, double x, double xi) const {
        const double a = alpha, b = beta, f = freq;
        auto c = [=](double s) { return a * std::sin(2.0 * std::numbers::pi * f * s) + b * s; };
        return fv_from_schedule(g, x, c, blocks, xi);
    }
};

}  // namespace lqexec::testing
