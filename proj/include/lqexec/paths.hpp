#pragma once

#include "lqexec/grid.hpp"
#include "lqexec/model.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace lqexec {

/// Brownian increments of one path on a uniform grid, scaled by sqrt(dt).
struct BrownianIncrements {
    std::vector<double> dW1, dW2, dW3;
};

/// Ensemble of Brownian paths, regenerated on demand from a counter-based
/// generator. Increments are drawn at `base_steps` resolution and summed in
/// groups, so every grid whose step count divides `base_steps` sees the same
/// underlying Brownian path.
class BrownianSource {
public:
    BrownianSource(std::size_t base_steps, double dt_base, std::size_t n_paths, std::uint64_t seed);

    [[nodiscard]] std::size_t paths() const noexcept { return n_paths_; }
    [[nodiscard]] std::size_t base_steps() const noexcept { return base_steps_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    /// Increments of path p aggregated onto `n_steps` steps.
    [[nodiscard]] BrownianIncrements increments(std::size_t p, std::size_t n_steps) const;

private:
    std::size_t base_steps_;
    double dt_base_;
    std::size_t n_paths_;
    std::uint64_t seed_;
};

BrownianSource simulate_brownian(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed);

std::vector<double> build_gamma(const DiscreteModel& m, const BrownianIncrements& w);
/// Returns (R, dW^R).
std::pair<std::vector<double>, std::vector<double>> build_resilience(const DiscreteModel& m,
                                                                     const BrownianIncrements& w);
std::vector<double> build_nu(const DiscreteModel& m, const std::vector<double>& R);
std::vector<double> build_nugamma_increments(const DiscreteModel& m, const std::vector<double>& gamma,
                                             const std::vector<double>& nu, const BrownianIncrements& w);

/// One realization of every driving process on the model grid.
struct PathBundle {
    BrownianIncrements w;
    std::vector<double> gamma;       // nodes
    std::vector<double> sqrt_gamma;  // nodes
    std::vector<double> R;           // nodes
    std::vector<double> dWR;         // steps
    std::vector<double> nu;          // nodes
    std::vector<double> d_nugamma;   // steps
    std::vector<double> exi;         // E_s[xi] at nodes
    std::vector<double> zeta;        // nodes
    double xi = 0.0;
    std::size_t index = 0;

    [[nodiscard]] std::size_t steps() const noexcept { return dWR.size(); }
};

PathBundle build_bundle(const DiscreteModel& m, BrownianIncrements w, std::size_t index = 0);

/// A model together with a Brownian ensemble. Cheap to copy.
class Ensemble {
public:
    Ensemble(ModelPtr model, BrownianSource source);
    Ensemble(const ModelSpec& spec, std::size_t n_paths, std::uint64_t seed);

    [[nodiscard]] const DiscreteModel& model() const noexcept { return *model_; }
    [[nodiscard]] const ModelPtr& model_ptr() const noexcept { return model_; }
    [[nodiscard]] const BrownianSource& source() const noexcept { return source_; }
    [[nodiscard]] std::size_t paths() const noexcept { return source_.paths(); }
    [[nodiscard]] std::uint64_t seed() const noexcept { return source_.seed(); }

    [[nodiscard]] PathBundle bundle(std::size_t p) const;

    /// Same Brownian paths, coarser model grid; n_steps must divide the base resolution.
    [[nodiscard]] Ensemble with_steps(std::size_t n_steps) const;

private:
    ModelPtr model_;
    BrownianSource source_;
};

}  // namespace lqexec
