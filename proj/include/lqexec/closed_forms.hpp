#pragma once

#include "lqexec/coefficient.hpp"
#include "lqexec/grid.hpp"
#include "lqexec/model.hpp"
#include "lqexec/paths.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace lqexec {

enum class Example {
    ow_deterministic,
    ow_random_target,
    nonexistence_52,
    diffusive_resilience_53,
    cancellation_54,
};

std::string_view to_string(Example e) noexcept;
std::optional<Example> example_from_string(std::string_view name) noexcept;
const std::vector<Example>& all_examples() noexcept;

/// Parameters of one of the worked examples with closed-form solutions.
struct ExampleConfig {
    Example which = Example::ow_deterministic;
    double rho = 1.0;
    double lambda = 0.0;
    double sigma = 0.0;
    double eta = 0.0;
    double rbar = 0.0;
    double gamma0 = 1.0;
    double T = 1.0;
    double x = 1.0;
    double d = 0.0;
    TerminalTarget xi;
    ZetaKind zeta = ZetaKind::zero;
    std::size_t n_steps = 1000;
    // Clipped Brownian-bridge mu of the non-existence example.
    std::uint64_t bridge_seed = 52;
    double bridge_amplitude = 1.5;
    double bridge_clip = 0.9;
    std::size_t bridge_resolution = 10000;

    /// Throws a configuration error if the example's parameter constraints fail.
    void validate() const;
    [[nodiscard]] ModelSpec to_spec() const;
};

ExampleConfig default_example(Example e);

/// K for the Obizhaeva-Wang setting (sigma = eta = mu = 0) with constant rho, lambda.
double ow_K(double s, double rho, double lambda, double T);
double ow_theta(double s, double rho, double lambda, double T);
/// Gamma and psi of the lambda = 0 case.
double ow_Gamma(double s, double rho, double T);
double ow_psi(double s, double rho, double T, double gamma0, double expected_xi);

/// Optimal strategy at node i of the Obizhaeva-Wang example with lambda = 0,
/// using the path's conditional expectations E_r[xi] for the stochastic integral.
double ow_optimal_strategy(std::size_t i, const PathBundle& b, const TimeGrid& grid, const ExampleConfig& c);

/// Diffusive-resilience example: K via the Lambert W function.
double ex53_K(double s, const ExampleConfig& c);
double ex53_theta(double s, const ExampleConfig& c);

struct StrategyAndDeviation {
    double X;
    double D;
};
/// Cancellation example at node i (sigma = eta, rbar = -1).
StrategyAndDeviation ex54_strategy_and_deviation(std::size_t i, const PathBundle& b, const DiscreteModel& m);

/// Non-existence example: K and theta by trapezoidal quadrature on the grid
/// refined `refine` times, sampled at the nodes of `grid`.
std::vector<double> ex52_K(const TimeGrid& grid, const Coefficient& mu, double rho, std::size_t refine = 10);
std::vector<double> ex52_theta(const TimeGrid& grid, const Coefficient& mu, double rho, std::size_t refine = 10);
/// Deterministic optimal state h0 exp(int_0^s mu/2 - (rho + mu) theta).
std::vector<double> ex52_state(const TimeGrid& grid, const Coefficient& mu, double rho, double h0,
                               std::size_t refine = 10);

/// Sum of |theta_{i+1} - theta_i|.
double total_variation(const std::vector<double>& v);

}  // namespace lqexec
