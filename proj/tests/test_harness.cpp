#include "lqexec/error.hpp"
#include "lqexec/harness.hpp"
#include "lqexec/parallel.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace lqexec;

namespace {

ExperimentConfig parse(const std::string& text, const ConfigOverrides& o = {}) {
    std::istringstream in(text);
    return parse_config(in, o);
}

ErrorKind parse_error(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::model;
}

const ResultRecord& find(const RunOutput& out, const std::string& metric, const std::string& strategy) {
    for (const auto& r : out.rows) {
        if (r.metric == metric && r.strategy == strategy) return r;
    }
    FAIL("missing row " << metric << '/' << strategy);
    return out.rows.front();
}

}  // namespace

TEST_CASE("configuration defaults and overrides") {
    const auto cfg = parse("[model]\nrho = 2\n", {7, 123, 50, std::nullopt});
    CHECK(cfg.kind == ExperimentKind::solve);
    CHECK(cfg.seed == 7);
    CHECK(cfg.n_paths == 123);
    CHECK(cfg.model.grid.steps() == 50);
    CHECK(cfg.model.rho(0.3) == 2.0);
    CHECK(cfg.perturbation_eps == 0.5);
    CHECK(cfg.level_min == 2);
    CHECK(cfg.level_max == 8);
}

TEST_CASE("configuration errors") {
    CHECK(parse_error("[model]\nfoo = 1\n") == ErrorKind::configuration);
    CHECK(parse_error("[extra]\nx = 1\n") == ErrorKind::configuration);
    CHECK(parse_error("[model]\nrho = abc\n") == ErrorKind::configuration);
    CHECK(parse_error("[experiment]\nkind = optimize\n") == ErrorKind::configuration);
    CHECK(parse_error("[experiment]\nkind = example\n") == ErrorKind::configuration);
    CHECK(parse_error("[experiment]\nexample = nope\n") == ErrorKind::configuration);
    CHECK(parse_error("[experiment]\nn_paths = 0\n") == ErrorKind::configuration);
    CHECK(parse_error("[model]\nrbar = 2\n") == ErrorKind::domain);
    CHECK(parse_error("[model]\nmu = wave:1,2\n") == ErrorKind::configuration);
}

TEST_CASE("coefficient text forms") {
    CHECK(parse_coefficient("0.25", 0.0, 1.0)(0.7) == 0.25);
    CHECK(parse_coefficient("linear:1,2", 0.0, 1.0)(0.5) == doctest::Approx(2.0));
    CHECK(parse_coefficient("sine:1,0.5,1", 0.0, 1.0)(0.25) == doctest::Approx(1.5));
    const auto bridge = parse_coefficient("bridge:3,1,0.5,0.2", 0.0, 1.0);
    CHECK(bridge(0.0) == doctest::Approx(0.2));
    CHECK(bridge(1.0) == doctest::Approx(0.2));
    for (double t : {0.1, 0.4, 0.8}) CHECK(std::abs(bridge(t) - 0.2) <= 0.5 + 1e-15);
}

TEST_CASE("configuration hash") {
    const std::string text = "[model]\nrho = 2\n";
    CHECK(parse(text).hash() == parse(text).hash());
    CHECK(parse(text).hash().size() == 16);
    CHECK(parse(text).hash() != parse(text, {8, {}, {}, {}}).hash());
    CHECK(parse(text).hash() == parse(text, {{}, {}, {}, std::string("elsewhere")}).hash());
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("results CSV format") {
    std::vector<ResultRecord> rows{{"b", "h", "m", "s", 0.1, 0.0, 5, 9}, {"a", "h", "z", "s", 1.0 / 3.0, 1e-3, 5, 9}};
    const auto csv = format_results_csv(rows);
    CHECK(csv ==
          "experiment,config_hash,metric,strategy,value,std_error,n_paths,seed\n"
          "a,h,z,s,0.33333333333333331,0.001,5,9\n"
          "b,h,m,s,0.10000000000000001,0,5,9\n");
}

TEST_CASE("example run reproduces the static optimum") {
    const auto cfg = parse("[experiment]\nkind = example\nexample = ow_deterministic\nn_paths = 20\n[model]\nn_steps = 100\n");
    const auto out = run_experiment(cfg);
    CHECK(find(out, "optimal_cost_formula", "optimal").value == doctest::Approx(1.0 / 3.0).epsilon(1e-8));
    CHECK(find(out, "K_max_abs_error", "optimal").value < 1e-8);
    CHECK(find(out, "Xstar_rms_error", "optimal").value < 1e-6);
    CHECK(out.series.at("K").size() == 101);
}

TEST_CASE("runs are byte-identical across repeats and thread counts") {
    const std::string text =
        "[experiment]\nkind = compare\nexample = diffusive_resilience_53\nn_paths = 64\nseed = 11\n[model]\nn_steps = 100\n";
    set_worker_count(1);
    const auto a = format_results_csv(run_experiment(parse(text)).rows);
    const auto b = format_results_csv(run_experiment(parse(text)).rows);
    set_worker_count(3);
    const auto c = format_results_csv(run_experiment(parse(text)).rows);
    set_worker_count(1);
    CHECK(a == b);
    CHECK(a == c);
}

TEST_CASE("validate") {
    auto item = [](const std::vector<ValidationItem>& v, const std::string& name) {
        for (const auto& i : v) {
            if (i.name == name) return i;
        }
        FAIL("missing " << name);
        return v.front();
    };
    SUBCASE("zero targets have zero moments") {
        const auto v = validate_config(parse("[model]\nsigma = 0.3\neta = 0.2\n[experiment]\nn_paths = 50\nstrategy = twap\n"));
        CHECK(item(v, "E_gammaT_xi2").estimate.mean == 0.0);
        CHECK(item(v, "E_int_gamma_zeta2").estimate.mean == 0.0);
        for (const auto& i : v) CHECK(i.passed);
    }
    SUBCASE("Brownian terminal target") {
        const auto v = validate_config(parse("[model]\ngamma0 = 1.5\n[targets]\nxi_b = 1\n[experiment]\nn_paths = 4000\n"));
        const auto& e = item(v, "E_gammaT_xi2").estimate;
        CHECK(std::abs(e.mean - 1.5) < 3.0 * e.std_error);
    }
    SUBCASE("no-trade deviation moment") {
        const auto v = validate_config(
            parse("[model]\nd = 0.4\ngamma0 = 2\nrho = 1.5\n[experiment]\nn_paths = 2\nstrategy = no_trade\n"));
        const double exact = 0.16 * (1.0 - std::exp(-3.0)) / (2.0 * 1.5 * 2.0);
        CHECK(item(v, "E_int_D2_over_gamma").estimate.mean == doctest::Approx(exact).epsilon(2e-3));
    }
}

TEST_CASE("error records") {
    const auto rec = error_record(Error(ErrorKind::solver, "denominator vanished", 17));
    CHECK(rec["error"]["kind"] == "solver");
    CHECK(rec["error"]["node"] == 17);
    CHECK(error_record(std::runtime_error("x"))["error"]["kind"] == "internal");
}
