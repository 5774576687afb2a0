#include "gravmc/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gravmc {

namespace {

using nlohmann::json;

class Collector {
public:
    void add(const std::string& msg) { errors_.push_back(msg); }
    bool ok() const { return errors_.empty(); }
    std::vector<std::string> take() { return std::move(errors_); }

private:
    std::vector<std::string> errors_;
};

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed, Collector& errs) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            errs.add(where + ": unknown key '" + it.key() + "'");
}

bool get_vec3(const json& obj, const std::string& where, const std::string& key,
              Vec3d& out, Collector& errs, bool required, Vec3d def = {}) {
    if (!obj.contains(key)) {
        if (required) {
            errs.add(where + "." + key + " required");
            return false;
        }
        out = def;
        return true;
    }
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
        errs.add(where + "." + key + " must be an array of 3 numbers");
        return false;
    }
    out = {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    return true;
}

template <class T>
bool get_num(const json& obj, const std::string& where, const std::string& key, T& out,
             Collector& errs, bool required, T def = T{}) {
    if (!obj.contains(key)) {
        if (required) {
            errs.add(where + "." + key + " required");
            return false;
        }
        out = def;
        return true;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        errs.add(where + "." + key + " must be a number");
        return false;
    }
    out = v.get<T>();
    return true;
}

bool get_bool(const json& obj, const std::string& where, const std::string& key, bool& out,
              Collector& errs, bool def) {
    if (!obj.contains(key)) {
        out = def;
        return true;
    }
    if (!obj.at(key).is_boolean()) {
        errs.add(where + "." + key + " must be a boolean");
        return false;
    }
    out = obj.at(key).get<bool>();
    return true;
}

bool get_str(const json& obj, const std::string& where, const std::string& key,
             std::string& out, Collector& errs, const std::string& def) {
    if (!obj.contains(key)) {
        out = def;
        return true;
    }
    if (!obj.at(key).is_string()) {
        errs.add(where + "." + key + " must be a string");
        return false;
    }
    out = obj.at(key).get<std::string>();
    return true;
}

bool unit_axis(Vec3d a) { return std::abs(norm(a) - 1.0) < 1e-9; }

void parse_scene(const json& j, Scene& s, Collector& errs) {
    if (!j.contains("scene")) {
        errs.add("scene required");
        return;
    }
    const json& sc = j.at("scene");
    if (!sc.is_object()) {
        errs.add("scene must be an object");
        return;
    }
    check_keys(sc, "scene",
               {"ball", "prisms", "background_density", "length_scale_m",
                "gravitational_constant"},
               errs);
    if (!sc.contains("ball")) {
        errs.add("scene.ball required");
    } else {
        const json& b = sc.at("ball");
        check_keys(b, "scene.ball", {"center_m", "radius_m"}, errs);
        get_vec3(b, "scene.ball", "center_m", s.domain.center, errs, false, {0, 0, 0});
        get_num(b, "scene.ball", "radius_m", s.domain.radius, errs, true);
    }
    get_num(sc, "scene", "background_density", s.background_density, errs, false, 0.0);
    get_num(sc, "scene", "length_scale_m", s.length_scale, errs, false, 1000.0);
    get_num(sc, "scene", "gravitational_constant", s.gravitational_constant, errs, false,
            6.674e-11);
    if (sc.contains("prisms")) {
        const json& ps = sc.at("prisms");
        if (!ps.is_array()) {
            errs.add("scene.prisms must be an array");
        } else {
            for (std::size_t i = 0; i < ps.size(); ++i) {
                const std::string where = "scene.prisms[" + std::to_string(i) + "]";
                const json& pj = ps[i];
                if (!pj.is_object()) {
                    errs.add(where + " must be an object");
                    continue;
                }
                check_keys(pj, where, {"min_corner_m", "max_corner_m", "density"}, errs);
                Prism pr;
                get_vec3(pj, where, "min_corner_m", pr.min_corner, errs, true);
                get_vec3(pj, where, "max_corner_m", pr.max_corner, errs, true);
                get_num(pj, where, "density", pr.density, errs, true);
                s.prisms.push_back(pr);
            }
        }
    }
}

void parse_layout(const json& j, SurveyLayout& lay, Collector& errs) {
    if (!j.contains("layout")) {
        errs.add("layout required");
        return;
    }
    const json& lj = j.at("layout");
    std::string kind;
    get_str(lj, "layout", "kind", kind, errs, "");
    if (kind == "line") {
        lay.kind = SurveyLayout::Kind::Line;
        check_keys(lj, "layout", {"kind", "origin_m", "axis", "count", "spacing_m"}, errs);
        get_vec3(lj, "layout", "origin_m", lay.origin, errs, true);
        get_vec3(lj, "layout", "axis", lay.axis_u, errs, true);
        get_num(lj, "layout", "count", lay.count_u, errs, true);
        get_num(lj, "layout", "spacing_m", lay.spacing_u, errs, true);
        if (lay.count_u < 1) errs.add("layout.count must be >= 1");
        if (lay.count_u > 1 && !(lay.spacing_u > 0))
            errs.add("layout.spacing_m must be > 0");
        if (lj.contains("axis") && !unit_axis(lay.axis_u))
            errs.add("layout.axis must be a unit vector");
    } else if (kind == "grid") {
        lay.kind = SurveyLayout::Kind::Grid;
        check_keys(lj, "layout",
                   {"kind", "origin_m", "axis_u", "axis_v", "count_u", "count_v",
                    "spacing_u_m", "spacing_v_m"},
                   errs);
        get_vec3(lj, "layout", "origin_m", lay.origin, errs, true);
        get_vec3(lj, "layout", "axis_u", lay.axis_u, errs, true);
        get_vec3(lj, "layout", "axis_v", lay.axis_v, errs, true);
        get_num(lj, "layout", "count_u", lay.count_u, errs, true);
        get_num(lj, "layout", "count_v", lay.count_v, errs, true);
        get_num(lj, "layout", "spacing_u_m", lay.spacing_u, errs, true);
        get_num(lj, "layout", "spacing_v_m", lay.spacing_v, errs, true);
        if (lay.count_u < 1) errs.add("layout.count_u must be >= 1");
        if (lay.count_v < 1) errs.add("layout.count_v must be >= 1");
        if (lay.count_u > 1 && !(lay.spacing_u > 0))
            errs.add("layout.spacing_u_m must be > 0");
        if (lay.count_v > 1 && !(lay.spacing_v > 0))
            errs.add("layout.spacing_v_m must be > 0");
        if (lj.contains("axis_u") && !unit_axis(lay.axis_u))
            errs.add("layout.axis_u must be a unit vector");
        if (lj.contains("axis_v") && !unit_axis(lay.axis_v))
            errs.add("layout.axis_v must be a unit vector");
    } else if (kind.empty()) {
        errs.add("layout.kind required ('line' or 'grid')");
    } else {
        errs.add("layout.kind must be 'line' or 'grid'");
    }
}

void parse_walker(const json& j, WalkerParams& wp, Collector& errs) {
    if (!j.contains("walker")) {
        errs.add("walker required");
        return;
    }
    const json& wj = j.at("walker");
    check_keys(wj, "walker", {"dt", "bridge", "max_steps", "exit_integral"}, errs);
    if (!wj.contains("dt")) {
        errs.add("walker.dt required");
    } else {
        get_num(wj, "walker", "dt", wp.dt, errs, true);
        if (!(wp.dt > 0)) errs.add("walker.dt must be > 0");
    }
    get_bool(wj, "walker", "bridge", wp.bridge_enabled, errs, false);
    get_num(wj, "walker", "max_steps", wp.max_steps, errs, false,
            static_cast<std::int64_t>(0));
    if (wp.max_steps < 0) errs.add("walker.max_steps must be >= 0 (0 means automatic)");
    std::string exit_mode;
    get_str(wj, "walker", "exit_integral", exit_mode, errs, "full");
    if (exit_mode == "full")
        wp.clip_exit_integral = false;
    else if (exit_mode == "clipped")
        wp.clip_exit_integral = true;
    else
        errs.add("walker.exit_integral must be 'full' or 'clipped'");
}

void parse_estimator(const json& j, EstimatorConfig& ec, Collector& errs) {
    if (!j.contains("estimator")) {
        errs.add("estimator required");
        return;
    }
    const json& ej = j.at("estimator");
    check_keys(ej, "estimator",
               {"walks", "seed", "workers", "precision", "truncation_policy"}, errs);
    if (!ej.contains("walks")) {
        errs.add("estimator.walks required");
    } else {
        get_num(ej, "estimator", "walks", ec.n_walks, errs, true);
        if (ec.n_walks < 1) errs.add("estimator.walks must be >= 1");
    }
    get_num(ej, "estimator", "seed", ec.base_seed, errs, false,
            static_cast<std::uint64_t>(0));
    get_num(ej, "estimator", "workers", ec.workers, errs, false, 0);
    if (ec.workers < 0) errs.add("estimator.workers must be >= 0 (0 means automatic)");
    std::string prec;
    get_str(ej, "estimator", "precision", prec, errs, "double");
    if (prec == "double")
        ec.precision = Precision::Double;
    else if (prec == "single")
        ec.precision = Precision::Single;
    else
        errs.add("estimator.precision must be 'single' or 'double'");
    std::string pol;
    get_str(ej, "estimator", "truncation_policy", pol, errs, "drop_and_report");
    if (pol == "error")
        ec.truncation_policy = TruncationPolicy::Error;
    else if (pol == "drop_and_report")
        ec.truncation_policy = TruncationPolicy::DropAndReport;
    else
        errs.add("estimator.truncation_policy must be 'error' or 'drop_and_report'");
}

void parse_rest(const json& j, ExperimentConfig& cfg, Collector& errs) {
    if (j.contains("acceleration")) {
        const json& aj = j.at("acceleration");
        check_keys(aj, "acceleration", {"enabled", "smooth_window"}, errs);
        get_bool(aj, "acceleration", "enabled", cfg.acceleration_enabled, errs, false);
        get_num(aj, "acceleration", "smooth_window", cfg.smooth_window, errs, false, 5);
        if (cfg.smooth_window < 1 || cfg.smooth_window % 2 == 0)
            errs.add("acceleration.smooth_window must be odd and positive");
    }
    if (j.contains("sweep")) {
        const json& sj = j.at("sweep");
        check_keys(sj, "sweep", {"dt_values", "walks_values"}, errs);
        SweepSpec sw;
        if (!sj.contains("dt_values") || !sj.at("dt_values").is_array() ||
            sj.at("dt_values").empty())
            errs.add("sweep.dt_values must be a non-empty array");
        else
            for (const auto& v : sj.at("dt_values")) {
                if (!v.is_number() || !(v.get<double>() > 0)) {
                    errs.add("sweep.dt_values entries must be positive numbers");
                    break;
                }
                sw.dt_values.push_back(v.get<double>());
            }
        if (!sj.contains("walks_values") || !sj.at("walks_values").is_array() ||
            sj.at("walks_values").empty())
            errs.add("sweep.walks_values must be a non-empty array");
        else
            for (const auto& v : sj.at("walks_values")) {
                if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
                    errs.add("sweep.walks_values entries must be positive integers");
                    break;
                }
                sw.walks_values.push_back(v.get<std::int64_t>());
            }
        cfg.sweep = std::move(sw);
    }
    if (j.contains("output")) {
        const json& oj = j.at("output");
        check_keys(oj, "output", {"dir", "format"}, errs);
        get_str(oj, "output", "dir", cfg.output_dir, errs, "out");
        std::string fmt;
        get_str(oj, "output", "format", fmt, errs, "csv");
        if (fmt == "csv")
            cfg.format = OutputFormat::Csv;
        else if (fmt == "json")
            cfg.format = OutputFormat::Json;
        else
            errs.add("output.format must be 'csv' or 'json'");
    }
}

} // namespace

ExperimentConfig parse_config(const std::string& raw_text) {
    Collector errs;
    json j;
    try {
        j = json::parse(raw_text);
    } catch (const json::parse_error& e) {
        errs.add(std::string("invalid JSON: ") + e.what());
        throw ConfigError{errs.take()};
    }
    if (!j.is_object()) {
        errs.add("top level must be a JSON object");
        throw ConfigError{errs.take()};
    }
    check_keys(j, "config",
               {"scene", "layout", "walker", "estimator", "acceleration", "sweep",
                "output"},
               errs);

    ExperimentConfig cfg;
    parse_scene(j, cfg.scene, errs);
    parse_layout(j, cfg.layout, errs);
    parse_walker(j, cfg.walker, errs);
    parse_estimator(j, cfg.estimator, errs);
    parse_rest(j, cfg, errs);

    if (errs.ok()) {
        for (const std::string& e : scene_errors(cfg.scene)) errs.add(e);
        // every survey point must lie inside the domain
        const auto pts = layout_points(cfg.layout);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!contains(cfg.scene.domain, pts[i])) {
                errs.add("layout: point " + std::to_string(i) + " lies outside the ball");
                break;
            }
        }
        if (cfg.acceleration_enabled) {
            if (cfg.layout.kind != SurveyLayout::Kind::Grid)
                errs.add("acceleration requires a grid layout");
            else {
                if (cfg.layout.count_v < 3)
                    errs.add("acceleration requires at least 3 rows along axis_v");
                if (!(cfg.layout.axis_v == Vec3d{0, 0, 1}))
                    errs.add("acceleration requires axis_v = [0,0,1]");
                if (cfg.smooth_window > cfg.layout.count_v)
                    errs.add("acceleration.smooth_window exceeds the grid's row count");
            }
        }
    }

    if (!errs.ok()) throw ConfigError{errs.take()};
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError{{"cannot open config file: " + path}};
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::json config_echo(const ExperimentConfig& cfg) {
    json j;
    j["scene"]["ball"]["center_m"] = {cfg.scene.domain.center.x, cfg.scene.domain.center.y,
                                      cfg.scene.domain.center.z};
    j["scene"]["ball"]["radius_m"] = cfg.scene.domain.radius;
    j["scene"]["background_density"] = cfg.scene.background_density;
    j["scene"]["length_scale_m"] = cfg.scene.length_scale;
    j["scene"]["gravitational_constant"] = cfg.scene.gravitational_constant;
    j["scene"]["prisms"] = json::array();
    for (const Prism& pr : cfg.scene.prisms) {
        json pj;
        pj["min_corner_m"] = {pr.min_corner.x, pr.min_corner.y, pr.min_corner.z};
        pj["max_corner_m"] = {pr.max_corner.x, pr.max_corner.y, pr.max_corner.z};
        pj["density"] = pr.density;
        j["scene"]["prisms"].push_back(pj);
    }
    if (cfg.layout.kind == SurveyLayout::Kind::Line) {
        j["layout"]["kind"] = "line";
        j["layout"]["origin_m"] = {cfg.layout.origin.x, cfg.layout.origin.y,
                                   cfg.layout.origin.z};
        j["layout"]["axis"] = {cfg.layout.axis_u.x, cfg.layout.axis_u.y,
                               cfg.layout.axis_u.z};
        j["layout"]["count"] = cfg.layout.count_u;
        j["layout"]["spacing_m"] = cfg.layout.spacing_u;
    } else {
        j["layout"]["kind"] = "grid";
        j["layout"]["origin_m"] = {cfg.layout.origin.x, cfg.layout.origin.y,
                                   cfg.layout.origin.z};
        j["layout"]["axis_u"] = {cfg.layout.axis_u.x, cfg.layout.axis_u.y,
                                 cfg.layout.axis_u.z};
        j["layout"]["axis_v"] = {cfg.layout.axis_v.x, cfg.layout.axis_v.y,
                                 cfg.layout.axis_v.z};
        j["layout"]["count_u"] = cfg.layout.count_u;
        j["layout"]["count_v"] = cfg.layout.count_v;
        j["layout"]["spacing_u_m"] = cfg.layout.spacing_u;
        j["layout"]["spacing_v_m"] = cfg.layout.spacing_v;
    }
    j["walker"]["dt"] = cfg.walker.dt;
    j["walker"]["bridge"] = cfg.walker.bridge_enabled;
    j["walker"]["max_steps"] = cfg.walker.max_steps;
    j["walker"]["exit_integral"] = cfg.walker.clip_exit_integral ? "clipped" : "full";
    j["estimator"]["walks"] = cfg.estimator.n_walks;
    j["estimator"]["seed"] = cfg.estimator.base_seed;
    j["estimator"]["precision"] =
        cfg.estimator.precision == Precision::Double ? "double" : "single";
    j["estimator"]["truncation_policy"] =
        cfg.estimator.truncation_policy == TruncationPolicy::Error ? "error"
                                                                   : "drop_and_report";
    j["acceleration"]["enabled"] = cfg.acceleration_enabled;
    j["acceleration"]["smooth_window"] = cfg.smooth_window;
    if (cfg.sweep) {
        j["sweep"]["dt_values"] = cfg.sweep->dt_values;
        j["sweep"]["walks_values"] = cfg.sweep->walks_values;
    }
    j["output"]["format"] = cfg.format == OutputFormat::Csv ? "csv" : "json";
    return j;
}

} // namespace gravmc
