#pragma once

#include "lqexec/model.hpp"
#include "lqexec/paths.hpp"
#include "lqexec/strategy.hpp"

#include <vector>

namespace lqexec {

/// Per-step coefficients of a scalar linear SDE
///   dH = (h_drift H + c_drift c + drift0) dt
///      + (h_vol1 H + c_vol1 c + vol1_0) dW1 + (h_vol2 H + c_vol2 c + vol2_0) dW2
/// driven by an input path c.
struct LinearStateCoefficients {
    std::vector<double> h_drift, c_drift, drift0;
    std::vector<double> h_vol1, c_vol1, vol1_0;
    std::vector<double> h_vol2, c_vol2, vol2_0;
};

/// Left-point Euler of the linear SDE; returns H at nodes 0..n.
std::vector<double> integrate_linear_state(const LinearStateCoefficients& c, double h0,
                                           const std::vector<double>& input, const PathBundle& b, double dt);

LinearStateCoefficients htilde_coefficients(const DiscreteModel& m);
LinearStateCoefficients hhat_coefficients(const DiscreteModel& m, const PathBundle& b);

/// State of the LQ problem with cross terms, driven by the raw control u.
std::vector<double> state_Htilde(const std::vector<double>& u, const PathBundle& b, const DiscreteModel& m);
/// State of the cross-term-free problem, driven by u-hat.
std::vector<double> state_Hhat(const std::vector<double>& uhat, const PathBundle& b, const DiscreteModel& m);

/// u = D / sqrt(gamma) at nodes 0..n-1.
std::vector<double> strategy_to_control(const Strategy& X, const PathBundle& b, const DiscreteModel& m);
/// Same map from an already computed deviation.
std::vector<double> deviation_to_control(const DeviationPath& D, const PathBundle& b);

/// X = (u - H0) / sqrt(gamma) on [t0, T) with H0 the state driven by u.
Strategy control_to_strategy(const std::vector<double>& u, const PathBundle& b, const DiscreteModel& m);

/// u-hat = u - ratio (H + sqrt(gamma) zeta), nodewise.
std::vector<double> remove_cross_terms(const std::vector<double>& u, const std::vector<double>& H,
                                       const PathBundle& b, const DiscreteModel& m);
/// u = u-hat + ratio (H + sqrt(gamma) zeta), nodewise.
std::vector<double> restore_cross_terms(const std::vector<double>& uhat, const std::vector<double>& H,
                                        const PathBundle& b, const DiscreteModel& m);

}  // namespace lqexec
