#include "lqexec/harness.hpp"

#include "lqexec/costs.hpp"
#include "lqexec/error.hpp"
#include "lqexec/parallel.hpp"
#include "lqexec/paths.hpp"
#include "lqexec/solver.hpp"
#include "lqexec/stats.hpp"
#include "lqexec/strategy.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <array>
#include <sstream>

namespace lqexec {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(ExperimentKind k) noexcept {
    switch (k) {
        case ExperimentKind::solve: return "solve";
        case ExperimentKind::compare: return "compare";
        case ExperimentKind::approximate: return "approximate";
        case ExperimentKind::validate: return "validate";
        case ExperimentKind::example: return "example";
    }
    return "unknown";
}

namespace {

const std::map<std::string, std::string>& defaults() {
    static const std::map<std::string, std::string> d = {
        {"model.t0", "0"},         {"model.T", "1"},          {"model.n_steps", "1000"}, {"model.gamma0", "1"},
        {"model.x", "1"},          {"model.d", "0"},          {"model.mu", "0"},         {"model.sigma", "0"},
        {"model.rho", "1"},        {"model.eta", "0"},        {"model.rbar", "0"},       {"model.lambda", "0"},
        {"targets.xi_a", "0"},     {"targets.xi_b", "0"},     {"targets.zeta", "zero"},  {"experiment.kind", "solve"},
        {"experiment.example", ""}, {"experiment.n_paths", "10000"}, {"experiment.seed", "1"},
        {"experiment.perturbation_eps", "0.5"}, {"experiment.levels", "2-8"}, {"experiment.strategy", "optimal"},
        {"output.dir", ""},
    };
    return d;
}

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::configuration, what); }

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || p != end || !std::isfinite(out)) bad(key + ": expected a number, got '" + v + "'");
    return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc{} || p != end) bad(key + ": expected a nonnegative integer, got '" + v + "'");
    return out;
}

std::vector<double> split_numbers(const std::string& key, const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
}

}  // namespace

Coefficient parse_coefficient(const std::string& text, double t0, double horizon) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return Coefficient::constant(to_double("coefficient", text));
    const std::string form = text.substr(0, colon);
    const auto args = split_numbers("coefficient " + form, text.substr(colon + 1));
    if (form == "linear") {
        if (args.size() != 2) bad("linear coefficient takes a,b");
        const double a = args[0], b = args[1];
        return Coefficient::function([a, b](double t) { return a + b * t; }, text);
    }
    if (form == "sine") {
        if (args.size() != 3) bad("sine coefficient takes offset,amp,freq");
        const double off = args[0], amp = args[1], freq = args[2];
        return Coefficient::function(
            [off, amp, freq](double t) { return off + amp * std::sin(2.0 * std::numbers::pi * freq * t); }, text);
    }
    if (form == "bridge") {
        if (args.size() != 4 || args[0] < 0.0) bad("bridge coefficient takes seed,amp,clip,offset");
        return clipped_brownian_bridge(t0, horizon, 10000, static_cast<std::uint64_t>(args[0]), args[1], args[2],
                                       args[3]);
    }
    bad("unknown coefficient form '" + form + "'");
}

std::string ExperimentConfig::canonical_text() const {
    std::string out;
    for (const auto& [k, v] : entries) {
        if (!k.starts_with("output.")) out += k + '=' + v + '\n';
    }
    return out;
}

ExperimentConfig parse_config(std::istream& in, const ConfigOverrides& overrides) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        bad(std::string("malformed configuration: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.entries = defaults();
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) bad("key '" + section + "' outside a section");
        for (const auto& [key, value] : body) {
            const std::string full = section + '.' + key;
            if (!defaults().contains(full)) bad("unknown configuration key '" + full + "'");
            cfg.entries[full] = trim(value.data());
        }
    }
    if (overrides.seed) cfg.entries["experiment.seed"] = std::to_string(*overrides.seed);
    if (overrides.paths) cfg.entries["experiment.n_paths"] = std::to_string(*overrides.paths);
    if (overrides.steps) cfg.entries["model.n_steps"] = std::to_string(*overrides.steps);
    if (overrides.out_dir) cfg.entries["output.dir"] = *overrides.out_dir;

    const auto& e = cfg.entries;
    auto num = [&](const std::string& k) { return to_double(k, e.at(k)); };
    auto uint = [&](const std::string& k) { return to_unsigned(k, e.at(k)); };

    const std::string kind = e.at("experiment.kind");
    if (kind == "solve") cfg.kind = ExperimentKind::solve;
    else if (kind == "compare") cfg.kind = ExperimentKind::compare;
    else if (kind == "approximate") cfg.kind = ExperimentKind::approximate;
    else if (kind == "validate") cfg.kind = ExperimentKind::validate;
    else if (kind == "example") cfg.kind = ExperimentKind::example;
    else bad("experiment.kind must be solve, compare, approximate, validate or example");

    cfg.n_paths = uint("experiment.n_paths");
    if (cfg.n_paths == 0) bad("experiment.n_paths must be positive");
    cfg.seed = uint("experiment.seed");
    cfg.perturbation_eps = num("experiment.perturbation_eps");
    {
        const std::string lv = e.at("experiment.levels");
        const auto dash = lv.find('-');
        if (dash == std::string::npos) bad("experiment.levels must look like lo-hi");
        cfg.level_min = static_cast<int>(to_unsigned("experiment.levels", trim(lv.substr(0, dash))));
        cfg.level_max = static_cast<int>(to_unsigned("experiment.levels", trim(lv.substr(dash + 1))));
        if (cfg.level_min > cfg.level_max || cfg.level_max > 30) bad("experiment.levels out of range");
    }
    const std::string strat = e.at("experiment.strategy");
    if (strat == "optimal") cfg.strategy = ValidateStrategy::optimal;
    else if (strat == "no_trade") cfg.strategy = ValidateStrategy::no_trade;
    else if (strat == "block_sell") cfg.strategy = ValidateStrategy::block_sell;
    else if (strat == "twap") cfg.strategy = ValidateStrategy::twap;
    else bad("experiment.strategy must be optimal, no_trade, block_sell or twap");
    cfg.out_dir = e.at("output.dir");

    const std::size_t n_steps = uint("model.n_steps");
    const std::string zeta = e.at("targets.zeta");
    const std::string example = e.at("experiment.example");
    if (!example.empty()) {
        const auto which = example_from_string(example);
        if (!which) bad("unknown example '" + example + "'");
        if (e.at("model.mu") != "0" || e.at("model.t0") != "0") bad("examples fix mu and t0");
        ExampleConfig c = default_example(*which);
        // keys left at their defaults keep the example's own parameters
        auto over = [&](const std::string& k, double& field) {
            if (e.at(k) != defaults().at(k)) field = num(k);
        };
        over("model.rho", c.rho);
        over("model.lambda", c.lambda);
        over("model.sigma", c.sigma);
        over("model.eta", c.eta);
        over("model.rbar", c.rbar);
        over("model.gamma0", c.gamma0);
        over("model.T", c.T);
        over("model.x", c.x);
        over("model.d", c.d);
        over("targets.xi_a", c.xi.a);
        over("targets.xi_b", c.xi.b);
        if (zeta == "expected_xi") c.zeta = ZetaKind::expected_xi;
        else if (zeta != "zero") bad("examples support targets.zeta = zero or expected_xi");
        c.n_steps = n_steps;
        c.validate();
        cfg.model = c.to_spec();
        cfg.example = c;
    } else {
        if (cfg.kind == ExperimentKind::example) bad("experiment.kind = example needs experiment.example");
        ModelSpec& s = cfg.model;
        const double t0 = num("model.t0");
        const double T = num("model.T");
        if (!(T > t0)) bad("model.T must exceed model.t0");
        s.grid = TimeGrid(t0, T, n_steps);
        s.mu = parse_coefficient(e.at("model.mu"), t0, T);
        s.sigma = parse_coefficient(e.at("model.sigma"), t0, T);
        s.rho = parse_coefficient(e.at("model.rho"), t0, T);
        s.eta = parse_coefficient(e.at("model.eta"), t0, T);
        s.rbar = parse_coefficient(e.at("model.rbar"), t0, T);
        s.lambda = parse_coefficient(e.at("model.lambda"), t0, T);
        s.gamma0 = num("model.gamma0");
        s.x = num("model.x");
        s.d = num("model.d");
        s.targets.xi = {num("targets.xi_a"), num("targets.xi_b")};
        if (zeta == "zero") s.targets.zeta.kind = ZetaKind::zero;
        else if (zeta == "expected_xi") s.targets.zeta.kind = ZetaKind::expected_xi;
        else {
            s.targets.zeta.kind = ZetaKind::deterministic;
            s.targets.zeta.path = parse_coefficient(zeta, t0, T);
        }
        s.validate();
    }
    return cfg;
}

ExperimentConfig load_config(const fs::path& path, const ConfigOverrides& overrides) {
    std::ifstream in(path);
    if (!in) bad("cannot read configuration file " + path.string());
    return parse_config(in, overrides);
}

namespace {

struct Context {
    const ExperimentConfig& cfg;
    std::string hash;
    Ensemble ens;
    OptimalSolver solver;

    explicit Context(const ExperimentConfig& c)
        : cfg(c), hash(c.hash()), ens(c.model, c.n_paths, c.seed), solver(ens.model_ptr()) {}

    ResultRecord row(const std::string& metric, const std::string& strategy, double value, double se) const {
        return {cfg.id(), hash, metric, strategy, value, se, ens.paths(), cfg.seed};
    }
    ResultRecord row(const std::string& metric, const std::string& strategy, const CostEstimate& c) const {
        return row(metric, strategy, c.mean, c.std_error);
    }
};

// Running part of the cost accumulated up to each node; the last entry adds
// the terminal term and the initial-deviation offset, so it equals J^pm.
std::vector<double> cost_curve(const Strategy& X, const PathBundle& b, const DiscreteModel& m) {
    const auto D = deviation_pm(X, b, m);
    const std::size_t n = X.steps();
    std::vector<double> c(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double e = X.values[k] - b.zeta[k];
        c[k + 1] = c[k] + (D.values[k] * D.values[k] / b.gamma[k] * m.kp.kappa[k] +
                           m.lambda[k] * b.gamma[k] * e * e) * m.dt();
    }
    c[n] += 0.5 * D.values[n] * D.values[n] / b.gamma[n] - m.spec.d * m.spec.d / (2.0 * b.gamma[0]);
    return c;
}

std::vector<double> column_mean(const std::vector<std::vector<double>>& rows) {
    std::vector<double> out(rows.empty() ? 0 : rows.front().size(), 0.0);
    std::vector<double> col(rows.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        for (std::size_t p = 0; p < rows.size(); ++p) col[p] = rows[p][j];
        out[j] = pairwise_sum(col) / static_cast<double>(rows.size());
    }
    return out;
}

std::vector<double> times(const TimeGrid& g) {
    std::vector<double> t(g.nodes());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = g.node(i);
    return t;
}

void solve_rows(const Context& ctx, RunOutput& out) {
    const auto& m = ctx.ens.model();
    struct PathResult {
        double mc, formula;
        std::vector<double> X, H, curve;
    };
    const auto res = map_paths(ctx.ens.paths(), [&](std::size_t p) {
        const auto b = ctx.ens.bundle(p);
        const auto o = ctx.solver.solve(b);
        auto X = o.Xstar.values;
        X.push_back(o.Xstar.xi_terminal);
        return PathResult{cost_pm(o.Xstar, b, m), o.cost_formula, std::move(X), o.Hstar, cost_curve(o.Xstar, b, m)};
    });
    std::vector<double> mc, formula;
    std::vector<std::vector<double>> X, H, curve;
    for (const auto& r : res) {
        mc.push_back(r.mc);
        formula.push_back(r.formula);
        X.push_back(r.X);
        H.push_back(r.H);
        curve.push_back(r.curve);
    }
    const auto& K = ctx.solver.riccati();
    out.rows.push_back(ctx.row("optimal_cost_formula", "optimal", estimate(formula)));
    out.rows.push_back(ctx.row("optimal_cost_mc", "optimal", estimate(mc)));
    out.rows.push_back(ctx.row("K0", "optimal", K.K.front(), 0.0));
    out.series["time"] = times(m.grid);
    out.series["K"] = K.K;
    out.series["theta"] = K.theta;
    out.series["mean_Xstar"] = column_mean(X);
    out.series["mean_Hstar"] = column_mean(H);
    out.series["cost_curve"]["optimal"] = column_mean(curve);
}

void compare_rows(const Context& ctx, RunOutput& out) {
    const auto& m = ctx.ens.model();
    const auto res = compare_with_perturbations(ctx.ens, ctx.solver, ctx.cfg.perturbation_eps);
    out.rows.push_back(ctx.row("cost_pm", "optimal", res.optimal_mc));
    out.rows.push_back(ctx.row("optimal_cost_formula", "optimal", res.optimal_formula));
    for (const auto& p : res.perturbations) {
        out.rows.push_back(ctx.row("cost_pm", p.strategy, p.cost));
        out.rows.push_back(ctx.row("excess_cost", p.strategy, p.cost.mean - res.optimal_mc.mean,
                                   combined_se(p.cost, res.optimal_mc)));
    }
    const auto check = check_cost_formula(ctx.ens);
    out.rows.push_back(ctx.row("formula_gap", "optimal", check.gap, check.combined_se));
    out.rows.push_back(ctx.row("formula_allowance", "optimal", check.allowance, 0.0));

    const auto family = perturbation_family(m, ctx.cfg.perturbation_eps);
    const auto curves = map_paths(ctx.ens.paths(), [&](std::size_t p) {
        const auto b = ctx.ens.bundle(p);
        const auto o = ctx.solver.solve(b);
        std::vector<std::vector<double>> c{cost_curve(o.Xstar, b, m)};
        std::vector<std::vector<double>> pos{o.Xstar.values};
        for (const auto& f : family) {
            const auto s = f.build(b, o.Xstar);
            c.push_back(cost_curve(s, b, m));
            pos.push_back(s.values);
        }
        return std::pair{c, pos};
    });
    out.series["time"] = times(m.grid);
    for (std::size_t j = 0; j <= family.size(); ++j) {
        const std::string name = j == 0 ? "optimal" : family[j - 1].name;
        std::vector<std::vector<double>> c, pos;
        for (const auto& [cc, pp] : curves) {
            c.push_back(cc[j]);
            pos.push_back(pp[j]);
        }
        out.series["cost_curve"][name] = column_mean(c);
        out.series["mean_position"][name] = column_mean(pos);
    }
}

void approximate_rows(const Context& ctx, RunOutput& out) {
    const auto& m = ctx.ens.model();
    const int lo = ctx.cfg.level_min, hi = ctx.cfg.level_max;
    const auto L = static_cast<std::size_t>(hi - lo + 1);
    // per path: J^pm(X*), then (metric integrand, J^fv) per level
    const auto res = map_paths(ctx.ens.paths(), [&](std::size_t p) {
        const auto b = ctx.ens.bundle(p);
        const auto o = ctx.solver.solve(b);
        std::vector<double> r{cost_pm(o.Xstar, b, m)};
        for (int level = lo; level <= hi; ++level) {
            const auto Xn = fv_approximate(o.u, b, m, level);
            r.push_back(metric_integrand(Xn, o.Xstar, b, m));
            r.push_back(cost_fv(Xn, b, m));
        }
        return r;
    });
    auto column = [&](std::size_t j) {
        std::vector<double> c(res.size());
        for (std::size_t p = 0; p < res.size(); ++p) c[p] = res[p][j];
        return c;
    };
    const auto jpm = estimate(column(0));
    out.rows.push_back(ctx.row("cost_pm", "optimal", jpm));
    std::vector<double> levels, dist, gap;
    for (std::size_t l = 0; l < L; ++l) {
        const std::string name = "level_" + std::to_string(lo + static_cast<int>(l));
        const auto d = metric_from_integrands(column(1 + 2 * l));
        const auto fv = estimate(column(2 + 2 * l));
        out.rows.push_back(ctx.row("distance", name, d.value, d.std_error));
        out.rows.push_back(ctx.row("cost_fv", name, fv));
        out.rows.push_back(ctx.row("cost_gap", name, std::abs(fv.mean - jpm.mean), combined_se(fv, jpm)));
        levels.push_back(lo + static_cast<int>(l));
        dist.push_back(d.value);
        gap.push_back(std::abs(fv.mean - jpm.mean));
    }
    out.series["level"] = levels;
    out.series["distance"] = dist;
    out.series["cost_gap"] = gap;
}

std::vector<double> closed_form_K(const ExampleConfig& c, const ModelSpec& spec) {
    if (c.which == Example::nonexistence_52) return ex52_K(spec.grid, spec.mu, c.rho);
    std::vector<double> K(spec.grid.nodes());
    for (std::size_t i = 0; i < K.size(); ++i) {
        const double s = spec.grid.node(i);
        switch (c.which) {
            case Example::diffusive_resilience_53: K[i] = ex53_K(s, c); break;
            case Example::cancellation_54: K[i] = ow_K(s, c.rho, 0.0, c.T); break;
            default: K[i] = ow_K(s, c.rho, c.lambda, c.T); break;
        }
    }
    return K;
}

void example_rows(const Context& ctx, RunOutput& out) {
    solve_rows(ctx, out);
    const auto& c = *ctx.cfg.example;
    const auto& m = ctx.ens.model();
    const auto& K = ctx.solver.riccati();
    const auto ref = closed_form_K(c, m.spec);
    double kerr = 0.0;
    for (std::size_t i = 0; i < K.K.size(); ++i) kerr = std::max(kerr, std::abs(K.K[i] - ref[i]));
    out.rows.push_back(ctx.row("K_max_abs_error", "optimal", kerr, 0.0));

    const bool ow_strategy = (c.which == Example::ow_deterministic || c.which == Example::ow_random_target) &&
                             c.lambda == 0.0;
    if (ow_strategy || c.which == Example::cancellation_54) {
        const auto errs = map_paths(ctx.ens.paths(), [&](std::size_t p) {
            const auto b = ctx.ens.bundle(p);
            const auto o = ctx.solver.solve(b);
            double e = 0.0;
            for (std::size_t i = 0; i < m.steps(); ++i) {
                const double ref = ow_strategy ? ow_optimal_strategy(i, b, m.grid, c)
                                               : ex54_strategy_and_deviation(i, b, m).X;
                e += (o.Xstar.values[i] - ref) * (o.Xstar.values[i] - ref);
            }
            return e / static_cast<double>(m.steps());
        });
        const auto est = estimate(errs);
        out.rows.push_back(ctx.row("Xstar_rms_error", "optimal", std::sqrt(est.mean), 0.0));
    }
}

Strategy validate_strategy(const ExperimentConfig& cfg, const OptimalSolver* solver, const PathBundle& b,
                           const DiscreteModel& m) {
    const std::size_t n = m.steps();
    const double x = m.spec.x;
    switch (cfg.strategy) {
        case ValidateStrategy::optimal: return solver->solve(b).Xstar;
        case ValidateStrategy::no_trade: return Strategy::progressively_measurable(x, std::vector<double>(n, x), b.xi);
        case ValidateStrategy::block_sell: return Strategy::progressively_measurable(x, std::vector<double>(n, 0.0), b.xi);
        case ValidateStrategy::twap: {
            std::vector<double> v(n);
            for (std::size_t k = 0; k < n; ++k) {
                const double f = static_cast<double>(k) / static_cast<double>(n);
                v[k] = x * (1.0 - f) + b.exi[k] * f;
            }
            return Strategy::progressively_measurable(x, std::move(v), b.xi);
        }
    }
    return {};
}

std::string_view strategy_name(ValidateStrategy s) {
    switch (s) {
        case ValidateStrategy::optimal: return "optimal";
        case ValidateStrategy::no_trade: return "no_trade";
        case ValidateStrategy::block_sell: return "block_sell";
        case ValidateStrategy::twap: return "twap";
    }
    return "unknown";
}

}  // namespace

std::vector<ValidationItem> validate_config(const ExperimentConfig& cfg) {
    const Ensemble ens(cfg.model, cfg.n_paths, cfg.seed);
    const auto& m = ens.model();
    // the solver is only built for the optimal strategy, so the other
    // strategies can be validated on configurations it does not cover
    std::optional<OptimalSolver> solver;
    if (cfg.strategy == ValidateStrategy::optimal) solver.emplace(ens.model_ptr());
    const auto rows = map_paths(ens.paths(), [&](std::size_t p) {
        const auto b = ens.bundle(p);
        double target = 0.0, dev = 0.0;
        for (std::size_t k = 0; k < m.steps(); ++k) target += b.gamma[k] * b.zeta[k] * b.zeta[k] * m.dt();
        const auto X = validate_strategy(cfg, solver ? &*solver : nullptr, b, m);
        const auto D = deviation_pm(X, b, m);
        for (std::size_t k = 0; k < m.steps(); ++k) dev += D.values[k] * D.values[k] / b.gamma[k] * m.dt();
        return std::array<double, 3>{b.gamma.back() * b.xi * b.xi, target, dev};
    });
    static const char* names[] = {"E_gammaT_xi2", "E_int_gamma_zeta2", "E_int_D2_over_gamma"};
    std::vector<ValidationItem> out;
    for (std::size_t j = 0; j < 3; ++j) {
        std::vector<double> c(rows.size());
        for (std::size_t p = 0; p < rows.size(); ++p) c[p] = rows[p][j];
        ValidationItem item{names[j], estimate(c, cfg.seed), false};
        item.passed = std::isfinite(item.estimate.mean) && std::isfinite(item.estimate.std_error);
        out.push_back(item);
    }
    return out;
}

RunOutput run_experiment(const ExperimentConfig& cfg) {
    RunOutput out;
    out.series = json::object();
    if (cfg.kind == ExperimentKind::validate) {
        const std::string hash = cfg.hash();
        const std::string strat(strategy_name(cfg.strategy));
        for (const auto& item : validate_config(cfg)) {
            out.rows.push_back({cfg.id(), hash, item.name, strat, item.estimate.mean, item.estimate.std_error,
                                cfg.n_paths, cfg.seed});
            out.rows.push_back({cfg.id(), hash, item.name + "_passed", strat, item.passed ? 1.0 : 0.0, 0.0,
                                cfg.n_paths, cfg.seed});
        }
        return out;
    }
    const Context ctx(cfg);
    switch (cfg.kind) {
        case ExperimentKind::solve: solve_rows(ctx, out); break;
        case ExperimentKind::compare: compare_rows(ctx, out); break;
        case ExperimentKind::approximate: approximate_rows(ctx, out); break;
        case ExperimentKind::example: example_rows(ctx, out); break;
        case ExperimentKind::validate: break;
    }
    return out;
}

void write_outputs(const fs::path& dir, const ExperimentConfig& cfg, const RunOutput& out, double wall_seconds) {
    fs::create_directories(dir);
    auto write = [&](const fs::path& name, const std::string& text) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) fail(ErrorKind::configuration, "cannot write " + (dir / name).string());
        f << text;
    };
    write("results.csv", format_results_csv(out.rows));
    write("series.json", out.series.dump(1) + "\n");
    json manifest = {
        {"version", version},
        {"experiment", cfg.id()},
        {"config_hash", cfg.hash()},
        {"seed", cfg.seed},
        {"n_paths", cfg.n_paths},
        {"n_steps", cfg.model.grid.steps()},
        {"threads", worker_count()},
        {"wall_time_seconds", wall_seconds},
        {"config", cfg.entries},
    };
    write("manifest.json", manifest.dump(1) + "\n");
}

json error_record(const std::exception& e) {
    json rec = {{"error", {{"message", e.what()}}}};
    if (const auto* le = dynamic_cast<const Error*>(&e)) {
        rec["error"]["kind"] = std::string(to_string(le->kind()));
        if (le->node()) rec["error"]["node"] = *le->node();
    } else {
        rec["error"]["kind"] = "internal";
    }
    return rec;
}

}  // namespace lqexec
