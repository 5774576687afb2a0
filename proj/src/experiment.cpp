#include "gravmc/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "gravmc/oracle.hpp"
#include "gravmc/version.hpp"

namespace gravmc {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Smoothing runs along the FD (v) axis of the grid, column by column: the
// per-column series is the set of nearby repeated measurements whose average
// trades no spatial structure away.
FieldSeries smooth_columns(const FieldSeries& grid, const SurveyLayout& lay, int window) {
    FieldSeries out = grid;
    const int nu = lay.count_u, nv = lay.count_v;
    std::vector<double> col(nv);
    for (int iu = 0; iu < nu; ++iu) {
        for (int iv = 0; iv < nv; ++iv) col[iv] = grid.values[std::size_t(iv) * nu + iu];
        const std::vector<double> sm = moving_average(col, window);
        for (int iv = 0; iv < nv; ++iv) out.values[std::size_t(iv) * nu + iu] = sm[iv];
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.config = config_echo(cfg);
    rep.layout = cfg.layout;

    const std::vector<Vec3d> pts = layout_points(cfg.layout);
    const auto t0 = std::chrono::steady_clock::now();
    rep.estimates = estimate_many(cfg.scene, pts, cfg.walker, cfg.estimator);
    rep.summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    rep.u_est.points = pts;
    rep.u_truth.points = pts;
    for (const PointEstimate& e : rep.estimates) {
        rep.u_est.values.push_back(e.mean);
        rep.u_est.standard_errors.push_back(e.standard_error);
        rep.summary.truncated_total += e.n_truncated;
    }
    for (const Vec3d& p : pts) rep.u_truth.values.push_back(scene_potential(cfg.scene, p));

    rep.summary.rms_u = rms_relative_error(rep.u_est, rep.u_truth);
    rep.summary.mean_offset_u = mean_offset(rep.u_est, rep.u_truth);
    for (double t : rep.u_truth.values)
        rep.summary.max_abs_u_truth = std::max(rep.summary.max_abs_u_truth, std::abs(t));
    rep.summary.walks_total =
        cfg.estimator.n_walks * static_cast<std::int64_t>(pts.size());

    if (cfg.acceleration_enabled && cfg.layout.kind == SurveyLayout::Kind::Grid) {
        const double dz = cfg.layout.spacing_v;
        rep.gz_raw = vertical_acceleration(rep.u_est, cfg.layout, dz);
        const FieldSeries smoothed = smooth_columns(rep.u_est, cfg.layout, cfg.smooth_window);
        rep.gz_smooth = vertical_acceleration(smoothed, cfg.layout, dz);
        FieldSeries truth;
        truth.points = rep.gz_raw->points;
        for (const Vec3d& p : truth.points)
            truth.values.push_back(scene_gz(cfg.scene, p, dz));
        rep.gz_truth = std::move(truth);
        rep.summary.rms_gz_raw = rms_relative_error(*rep.gz_raw, *rep.gz_truth);
        rep.summary.rms_gz_smooth = rms_relative_error(*rep.gz_smooth, *rep.gz_truth);
    }
    return rep;
}

namespace {

std::string results_csv(const ExperimentReport& rep) {
    std::ostringstream out;
    out << "x_m,y_m,z_m,u_num_SI,u_se_SI,u_truth_SI,gz_num_SI,gz_smooth_SI,gz_truth_SI\n";
    // map from interior grid points to gz rows, when present
    const std::size_t n = rep.u_est.points.size();
    std::size_t gz_begin = 0, gz_end = 0, nu = 0;
    if (rep.gz_raw) {
        nu = static_cast<std::size_t>(rep.layout.count_u);
        gz_begin = nu;           // first interior row starts after row 0
        gz_end = gz_begin + rep.gz_raw->points.size();
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3d p = rep.u_est.points[i];
        out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.z)
            << ',' << format_double(rep.u_est.values[i]) << ','
            << format_double(rep.u_est.standard_errors[i]) << ','
            << format_double(rep.u_truth.values[i]);
        if (rep.gz_raw && i >= gz_begin && i < gz_end) {
            const std::size_t k = i - gz_begin;
            out << ',' << format_double(rep.gz_raw->values[k]) << ','
                << format_double(rep.gz_smooth->values[k]) << ','
                << format_double(rep.gz_truth->values[k]);
        } else {
            out << ",,,";
        }
        out << '\n';
    }
    return out.str();
}

std::string results_json(const ExperimentReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    const std::size_t n = rep.u_est.points.size();
    std::size_t gz_begin = 0, gz_end = 0;
    if (rep.gz_raw) {
        gz_begin = static_cast<std::size_t>(rep.layout.count_u);
        gz_end = gz_begin + rep.gz_raw->points.size();
    }
    for (std::size_t i = 0; i < n; ++i) {
        nlohmann::json r;
        const Vec3d p = rep.u_est.points[i];
        r["x_m"] = p.x;
        r["y_m"] = p.y;
        r["z_m"] = p.z;
        r["u_num_SI"] = rep.u_est.values[i];
        r["u_se_SI"] = rep.u_est.standard_errors[i];
        r["u_truth_SI"] = rep.u_truth.values[i];
        if (rep.gz_raw && i >= gz_begin && i < gz_end) {
            const std::size_t k = i - gz_begin;
            r["gz_num_SI"] = rep.gz_raw->values[k];
            r["gz_smooth_SI"] = rep.gz_smooth->values[k];
            r["gz_truth_SI"] = rep.gz_truth->values[k];
        }
        rows.push_back(r);
    }
    return rows.dump(1) + "\n";
}

} // namespace

void write_report(const ExperimentReport& rep, const std::string& dir, OutputFormat fmt) {
    fs::create_directories(dir);
    if (fmt == OutputFormat::Csv)
        write_file(fs::path(dir) / "results.csv", results_csv(rep));
    else
        write_file(fs::path(dir) / "results.json", results_json(rep));

    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = rep.config;
    j["summary"]["rms_u"] = rep.summary.rms_u;
    j["summary"]["mean_offset_u_SI"] = rep.summary.mean_offset_u;
    j["summary"]["max_abs_u_truth_SI"] = rep.summary.max_abs_u_truth;
    if (rep.gz_raw) {
        j["summary"]["rms_gz_raw"] = rep.summary.rms_gz_raw;
        j["summary"]["rms_gz_smooth"] = rep.summary.rms_gz_smooth;
    }
    j["summary"]["walks_total"] = rep.summary.walks_total;
    j["summary"]["truncated_total"] = rep.summary.truncated_total;
    write_file(fs::path(dir) / "report.json", j.dump(1) + "\n");

    std::ostringstream t;
    t << "wall_seconds,walks_total\n"
      << format_double(rep.summary.wall_seconds) << ',' << rep.summary.walks_total << '\n';
    write_file(fs::path(dir) / "timing.csv", t.str());
}

void write_oracle_table(const ExperimentConfig& cfg, const std::string& dir) {
    fs::create_directories(dir);
    const std::vector<Vec3d> pts = layout_points(cfg.layout);
    std::ostringstream out;
    const bool grid = cfg.layout.kind == SurveyLayout::Kind::Grid;
    out << "x_m,y_m,z_m,u_truth_SI" << (grid ? ",gz_truth_SI" : "") << "\n";
    for (const Vec3d& p : pts) {
        out << format_double(p.x) << ',' << format_double(p.y) << ',' << format_double(p.z)
            << ',' << format_double(scene_potential(cfg.scene, p));
        if (grid) out << ',' << format_double(scene_gz(cfg.scene, p, cfg.layout.spacing_v));
        out << '\n';
    }
    write_file(fs::path(dir) / "oracle.csv", out.str());
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
    if (!cfg.sweep) throw std::invalid_argument("run_sweep: config has no sweep section");
    SweepResult sw;
    sw.dt_values = cfg.sweep->dt_values;
    sw.walks_values = cfg.sweep->walks_values;
    for (double dt : sw.dt_values) {
        std::vector<double> times, errs;
        for (std::int64_t n : sw.walks_values) {
            ExperimentConfig c = cfg;
            c.walker.dt = dt;
            c.walker.max_steps = 0;
            c.estimator.n_walks = n;
            c.acceleration_enabled = false;
            const ExperimentReport r = run_experiment(c);
            times.push_back(r.summary.wall_seconds);
            errs.push_back(r.summary.rms_u);
        }
        sw.wall_seconds.push_back(times);
        sw.rms_u.push_back(errs);
    }
    return sw;
}

namespace {

std::string sweep_csv(const SweepResult& sw, const std::vector<std::vector<double>>& cells) {
    std::ostringstream out;
    out << "dt_over_walks";
    for (std::int64_t n : sw.walks_values) out << ',' << n;
    out << '\n';
    for (std::size_t i = 0; i < sw.dt_values.size(); ++i) {
        out << format_double(sw.dt_values[i]);
        for (double v : cells[i]) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

} // namespace

std::string sweep_text_table(const SweepResult& sw) {
    std::ostringstream out;
    out << "wall time (s), rows dt, columns walks\n";
    out << std::setw(10) << "dt\\N";
    for (std::int64_t n : sw.walks_values) out << std::setw(12) << n;
    out << '\n';
    for (std::size_t i = 0; i < sw.dt_values.size(); ++i) {
        out << std::setw(10) << sw.dt_values[i];
        for (double v : sw.wall_seconds[i])
            out << std::setw(12) << std::fixed << std::setprecision(2) << v;
        out << std::defaultfloat << '\n';
    }
    return out.str();
}

void write_sweep(const SweepResult& sw, const std::string& dir) {
    fs::create_directories(dir);
    write_file(fs::path(dir) / "sweep_times.csv", sweep_csv(sw, sw.wall_seconds));
    write_file(fs::path(dir) / "sweep_rms.csv", sweep_csv(sw, sw.rms_u));
    write_file(fs::path(dir) / "sweep_times.txt", sweep_text_table(sw));
}

} // namespace gravmc
