#pragma once

#include <span>
#include <vector>

#include "gravmc/vec3.hpp"

namespace gravmc {

// Line: count points origin + i*spacing*axis.
// Grid: count_u x count_v points, origin + iu*spacing_u*axis_u
// + iv*spacing_v*axis_v, generated with iu fastest (row-major in iv).
// The v axis is the finite-difference direction.
struct SurveyLayout {
    enum class Kind { Line, Grid };
    Kind kind = Kind::Line;
    Vec3d origin{};   // m
    Vec3d axis_u{1, 0, 0};
    Vec3d axis_v{0, 0, 1};
    int count_u = 0;
    int count_v = 1;
    double spacing_u = 0;  // m
    double spacing_v = 0;  // m
};

std::vector<Vec3d> layout_points(const SurveyLayout& lay);

struct FieldSeries {
    std::vector<Vec3d> points;
    std::vector<double> values;
    std::vector<double> standard_errors;  // empty for exact series
};

// Centered finite difference of the potential along the grid's v axis:
// g(iu, iv) = (u(iu, iv+1) - u(iu, iv-1)) / (2 dz), interior rows only.
// dz must equal the grid's vertical spacing. Standard errors propagate as
// sqrt(se+^2 + se-^2) / (2 dz).
FieldSeries vertical_acceleration(const FieldSeries& potential_grid,
                                  const SurveyLayout& lay, double dz);

// Centered moving mean with symmetrically shrinking windows at the ends
// (width 1, 3, 5, ... up to `window`), so the output length equals the
// input length; window must be odd and no longer than the series.
std::vector<double> moving_average(std::span<const double> series, int window);

// sqrt(mean(((est - truth) / max|truth|)^2)); series must be aligned
double rms_relative_error(const FieldSeries& estimate, const FieldSeries& truth);

// mean(est - truth): the systematic offset induced by the finite domain
double mean_offset(const FieldSeries& estimate, const FieldSeries& truth);

} // namespace gravmc
