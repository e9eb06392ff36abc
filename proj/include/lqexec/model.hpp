#pragma once

#include "lqexec/coefficient.hpp"
#include "lqexec/grid.hpp"

#include <cstddef>
#include <memory>
#include <vector>

namespace lqexec {

/// Terminal target xi = a + b * W3_T.
struct TerminalTarget {
    double a = 0.0;
    double b = 0.0;

    [[nodiscard]] bool is_random() const noexcept { return b != 0.0; }
    [[nodiscard]] bool is_zero() const noexcept { return a == 0.0 && b == 0.0; }
};

enum class ZetaKind { zero, deterministic, expected_xi };

struct MovingTarget {
    ZetaKind kind = ZetaKind::zero;
    Coefficient path;  // used when kind == deterministic
};

struct TargetSpec {
    TerminalTarget xi;
    MovingTarget zeta;
};

struct ModelSpec {
    TimeGrid grid{0.0, 1.0, 1000};
    Coefficient mu;
    Coefficient sigma;
    Coefficient rho;
    Coefficient eta;
    Coefficient rbar;
    Coefficient lambda;
    double gamma0 = 1.0;
    TargetSpec targets;
    double x = 0.0;
    double d = 0.0;

    /// Throws on gamma0 <= 0, |rbar| > 1 or non-finite coefficients.
    void validate() const;

    [[nodiscard]] ModelSpec with_steps(std::size_t n_steps) const;

    [[nodiscard]] double kappa(double t) const;
    /// sigma^2 + 2 sigma eta rbar + eta^2, written as a sum of squares.
    [[nodiscard]] double c2(double t) const;

    /// Initial value d / sqrt(gamma0) - sqrt(gamma0) x of every state process.
    [[nodiscard]] double h0() const;
};

/// kappa and the ratio lambda / (lambda + kappa) with 0/0 := 0.
struct KappaPath {
    std::vector<double> kappa;
    std::vector<double> ratio;

    static constexpr double zero_tolerance = 1e-14;

    /// Throws a model error if lambda != 0 somewhere lambda + kappa vanishes.
    static KappaPath build(const std::vector<double>& lambda, const std::vector<double>& kappa);
    static double ratio_at(double lambda, double kappa);
};

/// Coefficients sampled on the simulation grid, shared by every path.
struct DiscreteModel {
    ModelSpec spec;
    TimeGrid grid;
    std::vector<double> mu, sigma, rho, eta, rbar, lambda;
    KappaPath kp;
    std::vector<double> c2;         // sigma^2 + 2 sigma eta rbar + eta^2
    std::vector<double> a;          // rho + mu - (sigma^2 + sigma eta rbar) / 2
    std::vector<double> vol1;       // sigma + eta rbar
    std::vector<double> vol2;       // eta sqrt(1 - rbar^2)
    std::vector<double> zeta_det;   // sampled zeta when deterministic

    explicit DiscreteModel(ModelSpec model);

    [[nodiscard]] std::size_t steps() const noexcept { return grid.steps(); }
    [[nodiscard]] double dt() const noexcept { return grid.dt(); }
};

using ModelPtr = std::shared_ptr<const DiscreteModel>;

ModelPtr discretize(const ModelSpec& spec);

}  // namespace lqexec
