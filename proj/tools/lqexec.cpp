// Command-line runner for the execution experiments.
#include "lqexec/closed_forms.hpp"
#include "lqexec/error.hpp"
#include "lqexec/harness.hpp"
#include "lqexec/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

namespace fs = std::filesystem;
using namespace lqexec;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> steps;
    std::optional<std::string> out;
    unsigned threads = 0;
};

fs::path output_dir(const ExperimentConfig& cfg) {
    if (!cfg.out_dir.empty()) return cfg.out_dir;
    if (const char* env = std::getenv("LQEXEC_OUT_DIR"); env && *env) return env;
    return "results";
}

ExperimentConfig load(const Options& o) {
    set_worker_count(o.threads);
    return load_config(o.config, {o.seed, o.paths, o.steps, o.out});
}

int report_error(const std::exception& e, const std::optional<fs::path>& dir) {
    const auto rec = error_record(e).dump();
    std::cerr << rec << '\n';
    if (dir) {
        std::error_code ec;
        fs::create_directories(*dir, ec);
        std::ofstream(*dir / "error.json") << rec << '\n';
    }
    return 1;
}

int cmd_run(const Options& o) {
    std::optional<fs::path> dir;
    if (o.out) dir = *o.out;
    try {
        const auto cfg = load(o);
        dir = output_dir(cfg);
        const auto start = std::chrono::steady_clock::now();
        const auto out = run_experiment(cfg);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_outputs(*dir, cfg, out, wall);
        std::cout << "wrote " << out.rows.size() << " rows to " << (*dir / "results.csv").string() << '\n';
        return 0;
    } catch (const std::exception& e) {
        return report_error(e, dir);
    }
}

int cmd_validate(const Options& o) {
    try {
        const auto cfg = load(o);
        nlohmann::json report = nlohmann::json::array();
        bool all = true;
        for (const auto& item : validate_config(cfg)) {
            report.push_back({{"name", item.name},
                              {"value", item.estimate.mean},
                              {"std_error", item.estimate.std_error},
                              {"n_paths", item.estimate.n_paths},
                              {"passed", item.passed}});
            all = all && item.passed;
        }
        std::cout << nlohmann::json{{"config_hash", cfg.hash()}, {"passed", all}, {"conditions", report}}.dump(1)
                  << '\n';
        return 0;
    } catch (const std::exception& e) {
        return report_error(e, std::nullopt);
    }
}

int cmd_list() {
    for (Example e : all_examples()) std::cout << to_string(e) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal execution experiments under stochastic price impact and resilience"};
    app.require_subcommand(1);
    Options o;
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker threads, 0 = all cores (results do not depend on it)");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "Configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "Override experiment.seed");
        sub->add_option("--paths", o.paths, "Override experiment.n_paths");
        sub->add_option("--steps", o.steps, "Override model.n_steps");
        sub->add_option("--threads", threads, "Worker threads, 0 = all cores");
    };
    auto* run = app.add_subcommand("run", "Run the configured experiment and write results");
    add_common(run);
    run->add_option("--out", o.out, "Output directory (default: output.dir, then $LQEXEC_OUT_DIR, then ./results)");
    auto* validate = app.add_subcommand("validate", "Estimate the integrability moments of the configuration");
    add_common(validate);
    auto* list = app.add_subcommand("list-examples", "List the built-in examples");

    CLI11_PARSE(app, argc, argv);
    o.threads = threads;
    if (run->parsed()) return cmd_run(o);
    if (validate->parsed()) return cmd_validate(o);
    if (list->parsed()) return cmd_list();
    return 2;
}
