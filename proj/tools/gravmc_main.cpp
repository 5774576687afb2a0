#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gravmc/experiment.hpp"
#include "gravmc/version.hpp"

namespace {

// exit codes: 0 success, 2 config error, 3 runtime error
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic gravity forward solver (Feynman-Kac random walks)"};
    app.set_version_flag("--version", gravmc::kVersion);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<double> dt;
    std::optional<std::int64_t> walks;
    std::optional<std::string> precision;
    std::optional<std::string> bridge;
    std::optional<int> smooth_window;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    bool oracle_only = false;

    app.add_option("--config", config_path, "experiment config (JSON)")->required();
    app.add_option("--seed", seed, "override estimator.seed");
    app.add_option("--workers", workers, "override estimator.workers (0 = auto)");
    app.add_option("--dt", dt, "override walker.dt (internal time units)");
    app.add_option("--walks", walks, "override estimator.walks");
    app.add_option("--precision", precision, "single|double");
    app.add_option("--bridge", bridge, "on|off");
    app.add_option("--smooth-window", smooth_window, "odd moving-average window");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "csv|json result rows");
    app.add_flag("--oracle-only", oracle_only, "write the analytic truth table and exit");

    CLI11_PARSE(app, argc, argv);

    gravmc::ExperimentConfig cfg;
    try {
        cfg = gravmc::load_config_file(config_path);

        if (seed) cfg.estimator.base_seed = *seed;
        if (workers) cfg.estimator.workers = *workers;
        if (dt) cfg.walker.dt = *dt;
        if (walks) cfg.estimator.n_walks = *walks;
        if (precision) {
            if (*precision == "single")
                cfg.estimator.precision = gravmc::Precision::Single;
            else if (*precision == "double")
                cfg.estimator.precision = gravmc::Precision::Double;
            else
                throw gravmc::ConfigError{{"--precision must be 'single' or 'double'"}};
        }
        if (bridge) {
            if (*bridge == "on")
                cfg.walker.bridge_enabled = true;
            else if (*bridge == "off")
                cfg.walker.bridge_enabled = false;
            else
                throw gravmc::ConfigError{{"--bridge must be 'on' or 'off'"}};
        }
        if (smooth_window) {
            if (*smooth_window < 1 || *smooth_window % 2 == 0)
                throw gravmc::ConfigError{{"--smooth-window must be odd and positive"}};
            cfg.smooth_window = *smooth_window;
        }
        if (out_dir) cfg.output_dir = *out_dir;
        if (format) {
            if (*format == "csv")
                cfg.format = gravmc::OutputFormat::Csv;
            else if (*format == "json")
                cfg.format = gravmc::OutputFormat::Json;
            else
                throw gravmc::ConfigError{{"--format must be 'csv' or 'json'"}};
        }
        if (!(cfg.walker.dt > 0)) throw gravmc::ConfigError{{"walker.dt must be > 0"}};
        if (cfg.estimator.n_walks < 1)
            throw gravmc::ConfigError{{"estimator.walks must be >= 1"}};
    } catch (const gravmc::ConfigError& e) {
        for (const std::string& msg : e.errors) std::cerr << "config error: " << msg << "\n";
        return kConfigError;
    }

    try {
        if (oracle_only) {
            gravmc::write_oracle_table(cfg, cfg.output_dir);
            std::cout << "oracle table written to " << cfg.output_dir << "/oracle.csv\n";
            return 0;
        }
        if (cfg.sweep) {
            const gravmc::SweepResult sw = gravmc::run_sweep(cfg);
            gravmc::write_sweep(sw, cfg.output_dir);
            std::cout << gravmc::sweep_text_table(sw);
            std::cout << "sweep tables written to " << cfg.output_dir << "\n";
            return 0;
        }
        const gravmc::ExperimentReport rep = gravmc::run_experiment(cfg);
        gravmc::write_report(rep, cfg.output_dir, cfg.format);
        std::cout << "points: " << rep.u_est.points.size()
                  << "  walks/point: " << cfg.estimator.n_walks
                  << "  wall: " << rep.summary.wall_seconds << " s\n"
                  << "rms_u: " << rep.summary.rms_u
                  << "  mean_offset: " << rep.summary.mean_offset_u << " m^2/s^2\n";
        if (rep.gz_raw)
            std::cout << "rms_gz raw: " << rep.summary.rms_gz_raw
                      << "  smoothed: " << rep.summary.rms_gz_smooth << "\n";
        if (rep.summary.truncated_total > 0)
            std::cout << "dropped truncated walks: " << rep.summary.truncated_total << "\n";
        std::cout << "report written to " << cfg.output_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}
