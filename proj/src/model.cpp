#include "lqexec/model.hpp"

#include "lqexec/error.hpp"

#include <cmath>
#include <string>

namespace lqexec {

void ModelSpec::validate() const {
    require(std::isfinite(gamma0) && gamma0 > 0.0, ErrorKind::configuration, "gamma0 must be positive");
    require(std::isfinite(x) && std::isfinite(d), ErrorKind::configuration, "x and d must be finite");
    require(std::isfinite(targets.xi.a) && std::isfinite(targets.xi.b), ErrorKind::configuration,
            "terminal target must be finite");
    for (const auto* c : {&mu, &sigma, &rho, &eta, &rbar, &lambda}) {
        (void)c->sample(grid);
    }
    const auto rb = rbar.sample(grid);
    for (std::size_t i = 0; i < rb.size(); ++i) {
        if (std::abs(rb[i]) > 1.0) {
            fail(ErrorKind::domain, "rbar outside [-1, 1] at node " + std::to_string(i), i);
        }
    }
    if (targets.zeta.kind == ZetaKind::deterministic) {
        (void)targets.zeta.path.sample(grid);
    }
}

ModelSpec ModelSpec::with_steps(std::size_t n_steps) const {
    ModelSpec out = *this;
    out.grid = grid.with_steps(n_steps);
    return out;
}

double ModelSpec::kappa(double t) const {
    const double s = sigma(t);
    const double e = eta(t);
    return 0.5 * (2.0 * rho(t) + mu(t) - s * s - e * e - 2.0 * s * e * rbar(t));
}

double ModelSpec::c2(double t) const {
    const double s = sigma(t);
    const double e = eta(t);
    const double r = rbar(t);
    const double v1 = s + e * r;
    return v1 * v1 + e * e * (1.0 - r * r);
}

double ModelSpec::h0() const { return d / std::sqrt(gamma0) - std::sqrt(gamma0) * x; }

double KappaPath::ratio_at(double lambda, double kappa) {
    const double den = lambda + kappa;
    if (std::abs(den) <= zero_tolerance) {
        if (lambda != 0.0) {
            fail(ErrorKind::model, "lambda is nonzero where lambda + kappa vanishes");
        }
        return 0.0;
    }
    return lambda / den;
}

KappaPath KappaPath::build(const std::vector<double>& lambda, const std::vector<double>& kappa) {
    KappaPath kp;
    kp.kappa = kappa;
    kp.ratio.resize(kappa.size());
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        require(std::isfinite(kappa[i]), ErrorKind::model, "kappa is not finite");
        try {
            kp.ratio[i] = ratio_at(lambda[i], kappa[i]);
        } catch (const Error& e) {
            throw Error(e.kind(), std::string(e.what()) + " (node " + std::to_string(i) + ")", i);
        }
    }
    return kp;
}

DiscreteModel::DiscreteModel(ModelSpec model) : spec(std::move(model)), grid(spec.grid) {
    spec.validate();
    mu = spec.mu.sample(grid);
    sigma = spec.sigma.sample(grid);
    rho = spec.rho.sample(grid);
    eta = spec.eta.sample(grid);
    rbar = spec.rbar.sample(grid);
    lambda = spec.lambda.sample(grid);
    const std::size_t n = grid.nodes();
    std::vector<double> kappa(n);
    c2.resize(n);
    a.resize(n);
    vol1.resize(n);
    vol2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = sigma[i];
        const double e = eta[i];
        const double r = rbar[i];
        kappa[i] = 0.5 * (2.0 * rho[i] + mu[i] - s * s - e * e - 2.0 * s * e * r);
        vol1[i] = s + e * r;
        vol2[i] = e * std::sqrt(1.0 - r * r);
        c2[i] = vol1[i] * vol1[i] + vol2[i] * vol2[i];
        a[i] = rho[i] + mu[i] - 0.5 * (s * s + s * e * r);
    }
    kp = KappaPath::build(lambda, kappa);
    zeta_det.assign(n, 0.0);
    if (spec.targets.zeta.kind == ZetaKind::deterministic) {
        zeta_det = spec.targets.zeta.path.sample(grid);
    }
}

ModelPtr discretize(const ModelSpec& spec) { return std::make_shared<const DiscreteModel>(spec); }

}  // namespace lqexec
