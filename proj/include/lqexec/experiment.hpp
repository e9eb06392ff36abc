#pragma once

#include "lqexec/closed_forms.hpp"
#include "lqexec/model.hpp"
#include "lqexec/paths.hpp"
#include "lqexec/solver.hpp"
#include "lqexec/stats.hpp"
#include "lqexec/strategy.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lqexec {

/// Named alternative to the optimal strategy, built from the path and X*.
struct Perturbation {
    std::string name;
    std::function<Strategy(const PathBundle&, const Strategy& xstar)> build;
};

/// TWAP, initial block, terminal block, X* plus a hump and X* plus a tilt.
std::vector<Perturbation> perturbation_family(const DiscreteModel& m, double eps);

struct StrategyCost {
    std::string strategy;
    CostEstimate cost;
};

struct CompareResult {
    CostEstimate optimal_mc;       // cost of X* by simulation
    CostEstimate optimal_formula;  // optimal cost formula
    std::vector<StrategyCost> perturbations;
    /// Pathwise costs, one row per path: X*, formula, then each perturbation.
    std::vector<std::vector<double>> samples;
};

CompareResult compare_with_perturbations(const Ensemble& ens, const OptimalSolver& solver, double eps);

/// Formula-vs-simulation check with a discretization allowance c dt^0.4,
/// where c is fitted from the gap on the grid coarsened `coarsen` times.
struct FormulaCheck {
    double gap = 0.0;         // |MC - formula| on the working grid
    double combined_se = 0.0;
    double allowance = 0.0;
    double coarse_gap = 0.0;
    [[nodiscard]] bool passed() const { return gap <= 3.0 * combined_se + allowance; }
};

FormulaCheck check_cost_formula(const Ensemble& ens, std::size_t coarsen = 4);

/// One row of results.csv.
struct ResultRecord {
    std::string experiment;
    std::string config_hash;
    std::string metric;
    std::string strategy;
    double value = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Sorted by (experiment, metric, strategy); values use 17 significant digits.
std::string format_results_csv(std::vector<ResultRecord> rows);

/// 64-bit FNV-1a of a string, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace lqexec
