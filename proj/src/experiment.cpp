#include "lqexec/experiment.hpp"

#include "lqexec/costs.hpp"
#include "lqexec/error.hpp"
#include "lqexec/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace lqexec {

std::vector<Perturbation> perturbation_family(const DiscreteModel& m, double eps) {
    const double x = m.spec.x;
    const double T = m.grid.horizon();
    const double t0 = m.grid.t0();
    const double scale = std::max(1.0, std::abs(x) + std::abs(m.spec.targets.xi.a));
    const TimeGrid grid = m.grid;
    auto frac = [grid, t0, T](std::size_t k) { return (grid.node(k) - t0) / (T - t0); };
    std::vector<Perturbation> out;
    out.push_back({"twap", [x, frac](const PathBundle& b, const Strategy&) {
                       std::vector<double> v(b.steps());
                       for (std::size_t k = 0; k < v.size(); ++k) v[k] = x * (1.0 - frac(k)) + b.exi[k] * frac(k);
                       return Strategy::progressively_measurable(x, std::move(v), b.xi);
                   }});
    out.push_back({"initial_block", [x](const PathBundle& b, const Strategy&) {
                       std::vector<double> v(b.exi.begin(), b.exi.end() - 1);
                       return Strategy::progressively_measurable(x, std::move(v), b.xi);
                   }});
    out.push_back({"terminal_block", [x](const PathBundle& b, const Strategy&) {
                       return Strategy::progressively_measurable(x, std::vector<double>(b.steps(), x), b.xi);
                   }});
    out.push_back({"hump", [eps, scale, frac](const PathBundle&, const Strategy& xs) {
                       Strategy s = xs;
                       for (std::size_t k = 0; k < s.values.size(); ++k) {
                           s.values[k] += eps * scale * 4.0 * frac(k) * (1.0 - frac(k));
                       }
                       return s;
                   }});
    out.push_back({"tilt", [eps, scale, frac](const PathBundle&, const Strategy& xs) {
                       Strategy s = xs;
                       for (std::size_t k = 0; k < s.values.size(); ++k) s.values[k] += eps * scale * (frac(k) - 0.5);
                       return s;
                   }});
    return out;
}

CompareResult compare_with_perturbations(const Ensemble& ens, const OptimalSolver& solver, double eps) {
    const auto& m = ens.model();
    const auto family = perturbation_family(m, eps);
    CompareResult res;
    res.samples = map_paths(ens.paths(), [&](std::size_t p) {
        const auto b = ens.bundle(p);
        const auto opt = solver.solve(b);
        std::vector<double> row;
        row.reserve(family.size() + 2);
        row.push_back(cost_pm(opt.Xstar, b, m));
        row.push_back(opt.cost_formula);
        for (const auto& pert : family) row.push_back(cost_pm(pert.build(b, opt.Xstar), b, m));
        return row;
    });
    auto column = [&](std::size_t j) {
        std::vector<double> c(res.samples.size());
        for (std::size_t p = 0; p < c.size(); ++p) c[p] = res.samples[p][j];
        return estimate(c, ens.seed());
    };
    res.optimal_mc = column(0);
    res.optimal_formula = column(1);
    for (std::size_t j = 0; j < family.size(); ++j) res.perturbations.push_back({family[j].name, column(j + 2)});
    return res;
}

FormulaCheck check_cost_formula(const Ensemble& ens, std::size_t coarsen) {
    require(coarsen >= 2 && ens.model().steps() % coarsen == 0, ErrorKind::grid_mismatch,
            "coarsening factor must divide the step count");
    auto gap_on = [](const Ensemble& e) {
        const OptimalSolver solver(e.model_ptr());
        const auto rows = map_paths(e.paths(), [&](std::size_t p) {
            const auto b = e.bundle(p);
            const auto opt = solver.solve(b);
            return std::pair{cost_pm(opt.Xstar, b, e.model()), opt.cost_formula};
        });
        std::vector<double> mc(rows.size()), formula(rows.size());
        for (std::size_t p = 0; p < rows.size(); ++p) std::tie(mc[p], formula[p]) = rows[p];
        const auto a = estimate(mc);
        const auto f = estimate(formula);
        return std::pair{std::abs(a.mean - f.mean), combined_se(a, f)};
    };
    FormulaCheck out;
    std::tie(out.gap, out.combined_se) = gap_on(ens);
    const auto coarse = ens.with_steps(ens.model().steps() / coarsen);
    out.coarse_gap = gap_on(coarse).first;
    out.allowance = out.coarse_gap * std::pow(1.0 / static_cast<double>(coarsen), 0.4);
    return out;
}

std::string format_results_csv(std::vector<ResultRecord> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRecord& a, const ResultRecord& b) {
        return std::tie(a.experiment, a.metric, a.strategy) < std::tie(b.experiment, b.metric, b.strategy);
    });
    std::string out = "experiment,config_hash,metric,strategy,value,std_error,n_paths,seed\n";
    char buf[64];
    for (const auto& r : rows) {
        out += r.experiment + ',' + r.config_hash + ',' + r.metric + ',' + r.strategy + ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.value);
        out += buf;
        out += ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.std_error);
        out += buf;
        out += ',' + std::to_string(r.n_paths) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace lqexec
