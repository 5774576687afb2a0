#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gravmc/estimator.hpp"
#include "gravmc/scene.hpp"
#include "gravmc/survey.hpp"
#include "gravmc/walker.hpp"

namespace gravmc {

enum class OutputFormat { Csv, Json };

struct SweepSpec {
    std::vector<double> dt_values;
    std::vector<std::int64_t> walks_values;
};

struct ExperimentConfig {
    Scene scene;
    SurveyLayout layout;
    WalkerParams walker;
    EstimatorConfig estimator;
    bool acceleration_enabled = false;
    int smooth_window = 5;
    std::optional<SweepSpec> sweep;
    std::string output_dir = "out";
    OutputFormat format = OutputFormat::Csv;
};

// Raised by parse_config; `errors` carries one field-addressed message per
// problem found (the whole config is validated before rejecting).
struct ConfigError {
    std::vector<std::string> errors;
};

// Parses and validates a JSON experiment description. Unknown keys are
// rejected. All defaults are applied here and are visible in config_echo().
ExperimentConfig parse_config(const std::string& raw_text);
ExperimentConfig load_config_file(const std::string& path);

// Fully-resolved view of a config (defaults included) used for the report
// echo; deterministic key order. Execution-only knobs (workers, output
// paths) are kept out so reruns with different scheduling stay byte-equal.
nlohmann::json config_echo(const ExperimentConfig& cfg);

} // namespace gravmc
