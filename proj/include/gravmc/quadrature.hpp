#pragma once

#include <functional>

namespace gravmc {

// Adaptive tensor Gauss-Legendre quadrature with a worst-cell-first split
// queue. Error estimates come from comparing 5^d against 3^d rules.
double adaptive_quad_2d(const std::function<double(double, double)>& f, double x0,
                        double x1, double y0, double y1, double abs_tol, int max_splits);

double adaptive_quad_3d(const std::function<double(double, double, double)>& f, double x0,
                        double x1, double y0, double y1, double z0, double z1,
                        double abs_tol, int max_splits);

} // namespace gravmc
