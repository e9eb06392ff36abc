#pragma once

#include "lqexec/closed_forms.hpp"
#include "lqexec/experiment.hpp"
#include "lqexec/model.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lqexec {

enum class ExperimentKind { solve, compare, approximate, validate, example };

std::string_view to_string(ExperimentKind k) noexcept;

/// Strategy examined by the validate experiment.
enum class ValidateStrategy { optimal, no_trade, block_sell, twap };

/// Parsed experiment configuration.
///
/// `entries` is the effective configuration (defaults, then file, then
/// command-line overrides) as canonical "section.key" -> value text; the
/// configuration hash is taken over it, output location excluded.
struct ExperimentConfig {
    std::map<std::string, std::string> entries;

    ExperimentKind kind = ExperimentKind::solve;
    std::optional<ExampleConfig> example;
    ModelSpec model;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 1;
    double perturbation_eps = 0.5;
    int level_min = 2;
    int level_max = 8;
    ValidateStrategy strategy = ValidateStrategy::optimal;
    std::string out_dir;

    [[nodiscard]] std::string canonical_text() const;
    [[nodiscard]] std::string hash() const { return fnv1a_hex(canonical_text()); }
    [[nodiscard]] std::string id() const { return std::string(to_string(kind)); }
};

struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<std::size_t> steps;
    std::optional<std::string> out_dir;
};

/// INI-style text with [model], [targets], [experiment] and [output]
/// sections. Unknown sections or keys are configuration errors.
ExperimentConfig parse_config(std::istream& in, const ConfigOverrides& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const ConfigOverrides& overrides = {});

/// Coefficient from its text form: a number, "linear:a,b", "sine:offset,amp,freq"
/// or "bridge:seed,amp,clip,offset" on [t0, T].
Coefficient parse_coefficient(const std::string& text, double t0, double horizon);

struct RunOutput {
    std::vector<ResultRecord> rows;
    nlohmann::json series;
};

RunOutput run_experiment(const ExperimentConfig& cfg);

/// Moment estimates behind the integrability conditions, for the configured strategy.
struct ValidationItem {
    std::string name;
    CostEstimate estimate;
    bool passed = false;
};
std::vector<ValidationItem> validate_config(const ExperimentConfig& cfg);

/// Writes results.csv, series.json and manifest.json into `dir`.
void write_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const RunOutput& out,
                   double wall_seconds);

/// Machine-readable error record.
nlohmann::json error_record(const std::exception& e);

inline constexpr const char* version = "1.0.0";

}  // namespace lqexec
