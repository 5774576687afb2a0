#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gravmc/config.hpp"
#include "gravmc/estimator.hpp"
#include "gravmc/survey.hpp"

namespace gravmc {

struct ExperimentSummary {
    double rms_u = 0;           // max-normalized RMS of the potential vs oracle
    double mean_offset_u = 0;   // mean(estimate - oracle), m^2/s^2
    double max_abs_u_truth = 0;
    double rms_gz_raw = 0;      // over all interior FD rows; 0 when no grid
    double rms_gz_smooth = 0;
    std::int64_t walks_total = 0;
    std::int64_t truncated_total = 0;
    double wall_seconds = 0;    // solver wall time (volatile; not in report.json)
};

struct ExperimentReport {
    nlohmann::json config; // fully resolved echo
    SurveyLayout layout;
    std::vector<PointEstimate> estimates;
    FieldSeries u_est;
    FieldSeries u_truth;
    // present when the layout is a grid and acceleration is enabled
    std::optional<FieldSeries> gz_raw;
    std::optional<FieldSeries> gz_smooth;
    std::optional<FieldSeries> gz_truth;
    ExperimentSummary summary;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

// writes results.csv (or results.json), report.json and timing.csv into dir;
// results and report are byte-reproducible for a fixed config+seed; wall
// times and worker counts live in timing.csv only
void write_report(const ExperimentReport& rep, const std::string& dir, OutputFormat fmt);

// oracle truth table for a layout (no walks): u_truth plus gz_truth on grids
void write_oracle_table(const ExperimentConfig& cfg, const std::string& dir);

struct SweepResult {
    std::vector<double> dt_values;
    std::vector<std::int64_t> walks_values;
    std::vector<std::vector<double>> wall_seconds; // [dt][walks]
    std::vector<std::vector<double>> rms_u;
};

// dt x walks grid of full potential runs over the config's layout
SweepResult run_sweep(const ExperimentConfig& cfg);
void write_sweep(const SweepResult& sw, const std::string& dir);
std::string sweep_text_table(const SweepResult& sw);

// shortest round-trip decimal formatting used by every writer
std::string format_double(double v);

} // namespace gravmc
