#include "gravmc/survey.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace gravmc {

std::vector<Vec3d> layout_points(const SurveyLayout& lay) {
    std::vector<Vec3d> pts;
    if (lay.kind == SurveyLayout::Kind::Line) {
        pts.reserve(lay.count_u);
        for (int i = 0; i < lay.count_u; ++i) {
            const double s = i * lay.spacing_u;
            pts.push_back(lay.origin + s * lay.axis_u);
        }
    } else {
        pts.reserve(static_cast<std::size_t>(lay.count_u) * lay.count_v);
        for (int iv = 0; iv < lay.count_v; ++iv)
            for (int iu = 0; iu < lay.count_u; ++iu)
                pts.push_back(lay.origin + (iu * lay.spacing_u) * lay.axis_u +
                              (iv * lay.spacing_v) * lay.axis_v);
    }
    return pts;
}

FieldSeries vertical_acceleration(const FieldSeries& grid, const SurveyLayout& lay,
                                  double dz) {
    if (lay.kind != SurveyLayout::Kind::Grid)
        throw std::invalid_argument("vertical_acceleration: layout must be a grid");
    if (lay.count_v < 3)
        throw std::invalid_argument(
            "vertical_acceleration: need at least 3 rows along the FD axis");
    if (dz != lay.spacing_v)
        throw std::invalid_argument(
            "vertical_acceleration: dz must equal the grid's vertical spacing");
    const std::size_t expected =
        static_cast<std::size_t>(lay.count_u) * static_cast<std::size_t>(lay.count_v);
    if (grid.values.size() != expected || grid.points.size() != expected)
        throw std::invalid_argument("vertical_acceleration: series does not match layout");

    const bool has_se = !grid.standard_errors.empty();
    FieldSeries out;
    const int nu = lay.count_u, nv = lay.count_v;
    for (int iv = 1; iv + 1 < nv; ++iv) {
        for (int iu = 0; iu < nu; ++iu) {
            const std::size_t up = static_cast<std::size_t>(iv + 1) * nu + iu;
            const std::size_t dn = static_cast<std::size_t>(iv - 1) * nu + iu;
            const std::size_t at = static_cast<std::size_t>(iv) * nu + iu;
            out.points.push_back(grid.points[at]);
            out.values.push_back((grid.values[up] - grid.values[dn]) / (2.0 * dz));
            if (has_se) {
                const double a = grid.standard_errors[up];
                const double b = grid.standard_errors[dn];
                out.standard_errors.push_back(std::sqrt(a * a + b * b) / (2.0 * dz));
            }
        }
    }
    return out;
}

std::vector<double> moving_average(std::span<const double> series, int window) {
    if (window < 1 || window % 2 == 0)
        throw std::invalid_argument("moving_average: window must be odd and positive");
    if (static_cast<std::size_t>(window) > series.size())
        throw std::invalid_argument("moving_average: window longer than the series");
    const std::size_t n = series.size();
    const int half = window / 2;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int k = std::min<std::int64_t>({half, static_cast<std::int64_t>(i),
                                              static_cast<std::int64_t>(n - 1 - i)});
        double s = 0;
        for (int j = -k; j <= k; ++j) s += series[i + j];
        out[i] = s / (2 * k + 1);
    }
    return out;
}

namespace {

void check_aligned(const FieldSeries& a, const FieldSeries& b, const char* who) {
    if (a.values.size() != b.values.size() || a.points.size() != b.points.size())
        throw std::invalid_argument(std::string(who) + ": series length mismatch");
}

} // namespace

double rms_relative_error(const FieldSeries& estimate, const FieldSeries& truth) {
    check_aligned(estimate, truth, "rms_relative_error");
    if (truth.values.empty()) return 0;
    double scale = 0;
    for (double t : truth.values) scale = std::max(scale, std::abs(t));
    double acc = 0;
    bool any = false;
    for (std::size_t i = 0; i < truth.values.size(); ++i) {
        const double d = estimate.values[i] - truth.values[i];
        if (d != 0) any = true;
        if (scale > 0) acc += (d / scale) * (d / scale);
    }
    if (scale == 0) return any ? std::numeric_limits<double>::infinity() : 0.0;
    return std::sqrt(acc / static_cast<double>(truth.values.size()));
}

double mean_offset(const FieldSeries& estimate, const FieldSeries& truth) {
    check_aligned(estimate, truth, "mean_offset");
    if (truth.values.empty()) return 0;
    double acc = 0;
    for (std::size_t i = 0; i < truth.values.size(); ++i)
        acc += estimate.values[i] - truth.values[i];
    return acc / static_cast<double>(truth.values.size());
}

} // namespace gravmc
