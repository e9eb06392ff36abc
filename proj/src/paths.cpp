#include "lqexec/paths.hpp"

#include "lqexec/error.hpp"
#include "lqexec/rng.hpp"

#include <cmath>
#include <string>

namespace lqexec {

BrownianSource::BrownianSource(std::size_t base_steps, double dt_base, std::size_t n_paths,
                               std::uint64_t seed)
    : base_steps_(base_steps), dt_base_(dt_base), n_paths_(n_paths), seed_(seed) {
    require(n_paths >= 1, ErrorKind::configuration, "ensemble needs at least one path");
    require(base_steps >= 1, ErrorKind::configuration, "ensemble needs at least one step");
}

BrownianIncrements BrownianSource::increments(std::size_t p, std::size_t n_steps) const {
    require(n_steps >= 1 && base_steps_ % n_steps == 0, ErrorKind::grid_mismatch,
            "step count " + std::to_string(n_steps) + " does not divide base resolution " +
                std::to_string(base_steps_));
    const std::size_t group = base_steps_ / n_steps;
    const double scale = std::sqrt(dt_base_);
    BrownianIncrements w;
    w.dW1.assign(n_steps, 0.0);
    w.dW2.assign(n_steps, 0.0);
    w.dW3.assign(n_steps, 0.0);
    for (std::size_t k = 0; k < n_steps; ++k) {
        double s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (std::size_t j = k * group; j < (k + 1) * group; ++j) {
            const auto idx = static_cast<std::uint32_t>(j);
            const auto [z1, z2] = normal_pair(seed_, p, idx, 0);
            s1 += z1;
            s2 += z2;
            s3 += normal_pair(seed_, p, idx, 1).first;
        }
        w.dW1[k] = scale * s1;
        w.dW2[k] = scale * s2;
        w.dW3[k] = scale * s3;
    }
    return w;
}

BrownianSource simulate_brownian(const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed) {
    return {grid.steps(), grid.dt(), n_paths, seed};
}

std::vector<double> build_gamma(const DiscreteModel& m, const BrownianIncrements& w) {
    const std::size_t n = m.steps();
    const double dt = m.dt();
    std::vector<double> gamma(n + 1);
    const double log0 = std::log(m.spec.gamma0);
    double acc = 0.0;
    gamma[0] = m.spec.gamma0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += (m.mu[k] - 0.5 * m.sigma[k] * m.sigma[k]) * dt + m.sigma[k] * w.dW1[k];
        gamma[k + 1] = std::exp(log0 + acc);
    }
    return gamma;
}

std::pair<std::vector<double>, std::vector<double>> build_resilience(const DiscreteModel& m,
                                                                     const BrownianIncrements& w) {
    const std::size_t n = m.steps();
    const double dt = m.dt();
    std::vector<double> R(n + 1, 0.0);
    std::vector<double> dWR(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double r = m.rbar[k];
        dWR[k] = r == 1.0 ? w.dW1[k] : r * w.dW1[k] + std::sqrt(1.0 - r * r) * w.dW2[k];
        R[k + 1] = R[k] + m.rho[k] * dt + m.eta[k] * dWR[k];
    }
    return {std::move(R), std::move(dWR)};
}

std::vector<double> build_nu(const DiscreteModel& m, const std::vector<double>& R) {
    const std::size_t n = m.steps();
    const double dt = m.dt();
    std::vector<double> nu(n + 1);
    double qv = 0.0;
    nu[0] = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        qv += m.eta[k] * m.eta[k] * dt;
        nu[k + 1] = std::exp(R[k + 1] + 0.5 * qv);
    }
    return nu;
}

std::vector<double> build_nugamma_increments(const DiscreteModel& m, const std::vector<double>& gamma,
                                             const std::vector<double>& nu, const BrownianIncrements& w) {
    const std::size_t n = m.steps();
    const double dt = m.dt();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double drift = m.mu[k] + m.rho[k] + m.eta[k] * m.eta[k] + m.sigma[k] * m.eta[k] * m.rbar[k];
        out[k] = nu[k] * gamma[k] * (drift * dt + m.vol1[k] * w.dW1[k] + m.vol2[k] * w.dW2[k]);
    }
    return out;
}

PathBundle build_bundle(const DiscreteModel& m, BrownianIncrements w, std::size_t index) {
    const std::size_t n = m.steps();
    require(w.dW1.size() == n && w.dW2.size() == n && w.dW3.size() == n, ErrorKind::grid_mismatch,
            "Brownian increments do not match the model grid");
    PathBundle b;
    b.index = index;
    b.gamma = build_gamma(m, w);
    b.sqrt_gamma.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) b.sqrt_gamma[i] = std::sqrt(b.gamma[i]);
    auto [R, dWR] = build_resilience(m, w);
    b.R = std::move(R);
    b.dWR = std::move(dWR);
    b.nu = build_nu(m, b.R);
    b.d_nugamma = build_nugamma_increments(m, b.gamma, b.nu, w);

    const auto& xi = m.spec.targets.xi;
    b.exi.resize(n + 1);
    double w3 = 0.0;
    b.exi[0] = xi.a;
    for (std::size_t k = 0; k < n; ++k) {
        w3 += w.dW3[k];
        b.exi[k + 1] = xi.a + xi.b * w3;
    }
    b.xi = b.exi[n];
    switch (m.spec.targets.zeta.kind) {
        case ZetaKind::zero: b.zeta.assign(n + 1, 0.0); break;
        case ZetaKind::deterministic: b.zeta = m.zeta_det; break;
        case ZetaKind::expected_xi: b.zeta = b.exi; break;
    }
    b.w = std::move(w);
    return b;
}

Ensemble::Ensemble(ModelPtr model, BrownianSource source) : model_(std::move(model)), source_(source) {
    require(source_.base_steps() % model_->steps() == 0, ErrorKind::grid_mismatch,
            "model grid does not divide the Brownian base resolution");
}

Ensemble::Ensemble(const ModelSpec& spec, std::size_t n_paths, std::uint64_t seed)
    : Ensemble(discretize(spec), simulate_brownian(spec.grid, n_paths, seed)) {}

PathBundle Ensemble::bundle(std::size_t p) const {
    return build_bundle(*model_, source_.increments(p, model_->steps()), p);
}

Ensemble Ensemble::with_steps(std::size_t n_steps) const {
    return {discretize(model_->spec.with_steps(n_steps)), source_};
}

}  // namespace lqexec
