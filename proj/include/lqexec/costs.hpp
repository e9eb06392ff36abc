#pragma once

#include "lqexec/model.hpp"
#include "lqexec/paths.hpp"
#include "lqexec/stats.hpp"
#include "lqexec/strategy.hpp"

#include <functional>
#include <vector>

namespace lqexec {

/// Running penalty sum of lambda gamma (X - zeta)^2 dt over [t0, T).
double risk_term(const Strategy& X, const PathBundle& b, const DiscreteModel& m);

/// Trading part of the finite-variation cost: the left-limit deviation
/// integrated against X plus half the squared node increments weighted by gamma.
double trading_cost_fv(const Strategy& X, const DeviationPath& D, const PathBundle& b);

/// Right-hand side of the pathwise identity for the trading part:
/// (D_T^2 / gamma_T - d^2 / gamma_0 - sum D^2 nu^2 delta(1 / (nu^2 gamma))) / 2.
double trading_cost_identity_rhs(const DeviationPath& D, const PathBundle& b, const DiscreteModel& m);

double cost_fv(const Strategy& X, const PathBundle& b, const DiscreteModel& m);
double cost_fv(const Strategy& X, const DeviationPath& D, const PathBundle& b, const DiscreteModel& m);

double cost_pm(const Strategy& X, const PathBundle& b, const DiscreteModel& m);
double cost_pm(const Strategy& X, const DeviationPath& D, const PathBundle& b, const DiscreteModel& m);
/// The same functional written as a quadratic form in (D, Hbar).
double cost_pm_quadratic(const DeviationPath& D, const HiddenDeviationPath& H, const PathBundle& b,
                         const DiscreteModel& m);

/// Cost of the LQ problem with cross terms; H is the state at nodes 0..n.
double cost_J(const std::vector<double>& u, const std::vector<double>& H, const PathBundle& b,
              const DiscreteModel& m);
/// Cost of the cross-term-free LQ problem.
double cost_Jhat(const std::vector<double>& uhat, const std::vector<double>& H, const PathBundle& b,
                 const DiscreteModel& m);

/// Monte-Carlo mean of a pathwise functional over the ensemble.
CostEstimate monte_carlo(const Ensemble& ens, const std::function<double(const PathBundle&)>& f);

/// Pathwise values of a functional over the ensemble, in path order.
std::vector<double> pathwise(const Ensemble& ens, const std::function<double(const PathBundle&)>& f);

}  // namespace lqexec
