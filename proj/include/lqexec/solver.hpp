#pragma once

#include "lqexec/grid.hpp"
#include "lqexec/model.hpp"
#include "lqexec/paths.hpp"
#include "lqexec/stats.hpp"
#include "lqexec/strategy.hpp"

#include <cstddef>
#include <vector>

namespace lqexec {

/// Coefficients of the model evaluated at one instant.
struct PointCoefficients {
    double mu, sigma, rho, eta, rbar, lambda;
    double kappa, ratio, c2, a, vol1, vol2;

    static PointCoefficients at(const ModelSpec& spec, double t);
};

/// Right-hand side F of dK/d(T - s) = F(s, K) together with its denominator
/// lambda + kappa + c2 K.
struct RiccatiRhs {
    double value;
    double denominator;
};
RiccatiRhs riccati_rhs(const PointCoefficients& c, double K);

/// Deterministic solution of the Riccati equation (martingale part zero).
struct RiccatiSolution {
    TimeGrid grid;
    std::size_t refine = 10;
    std::vector<double> K;      // simulation-grid nodes
    std::vector<double> theta;
    std::vector<double> den;    // lambda + kappa + c2 K
    TimeGrid fine_grid;
    std::vector<double> K_fine;
    std::vector<double> theta_fine;
    /// Per step, the integral of mu/2 - sigma^2/8 - a (ratio + theta) over the
    /// step, by trapezoid on the refined grid.
    std::vector<double> state_drift_integral;
    static constexpr bool L_zero = true;
};

/// Backward RK4 on the grid refined `refine` times, then sampled at the nodes.
RiccatiSolution solve_K(const ModelSpec& spec, std::size_t refine = 10);

/// theta at the nodes of `K.grid`.
std::vector<double> compute_theta(const RiccatiSolution& K, const ModelSpec& spec);

/// psi for one path. Gamma is filled in the random-target subfamily.
struct PsiSolution {
    std::vector<double> psi;
    std::vector<double> Gamma;
    static constexpr bool phi_zero = true;
};

/// Deterministic precomputation for psi. Supports two cases: targets with
/// xi = 0 and lambda zeta = 0 (psi vanishes), and the subfamily with
/// sigma = eta = mu = 0, constant rho > 0 and constant lambda >= 0.
class PsiSolver {
public:
    PsiSolver(const DiscreteModel& m, const RiccatiSolution& K);

    [[nodiscard]] bool vanishes() const noexcept { return vanishes_; }
    [[nodiscard]] PsiSolution solve(const PathBundle& b) const;
    [[nodiscard]] const std::vector<double>& gamma_fine() const noexcept { return Gamma_fine_; }

private:
    bool vanishes_ = false;
    bool zeta_is_exi_ = false;
    double sqrt_gamma0_ = 1.0;
    std::vector<double> Gamma_;
    std::vector<double> Gamma_fine_;
    std::vector<double> A_;  // coefficient of E_s[xi]
    std::vector<double> B_;  // moving-target part
};

PsiSolution solve_psi(const DiscreteModel& m, const PathBundle& b, const RiccatiSolution& K);

std::vector<double> compute_theta0(const PsiSolution& psi, const RiccatiSolution& K, const DiscreteModel& m,
                                   const PathBundle& b);

/// Optimal state by the exponential form of its linear SDE. The drift of the
/// homogeneous part is integrated on the refined Riccati grid.
std::vector<double> optimal_state(const DiscreteModel& m, const PathBundle& b, const RiccatiSolution& K,
                                  const std::vector<double>& theta0);

struct OptimalPath {
    PsiSolution psi;
    std::vector<double> theta0;
    std::vector<double> Hstar;
    std::vector<double> uhat;
    std::vector<double> u;
    Strategy Xstar;
    double C0 = 0.0;          // pathwise integrand of the constant term
    double cost_formula = 0.0;
};

OptimalPath optimal_strategy(const DiscreteModel& m, const PathBundle& b, const RiccatiSolution& K,
                             const PsiSolution& psi, const std::vector<double>& theta0);

/// Solves the deterministic parts once and produces optimal paths on demand.
class OptimalSolver {
public:
    explicit OptimalSolver(ModelPtr model, std::size_t refine = 10);

    [[nodiscard]] const RiccatiSolution& riccati() const noexcept { return K_; }
    [[nodiscard]] const DiscreteModel& model() const noexcept { return *model_; }
    [[nodiscard]] OptimalPath solve(const PathBundle& b) const;

private:
    ModelPtr model_;
    RiccatiSolution K_;
    PsiSolver psi_;
};

/// Monte-Carlo estimate of the optimal cost formula, with C0 averaged over paths.
CostEstimate optimal_cost(const Ensemble& ens, const OptimalSolver& solver);

}  // namespace lqexec
