#include "gravmc/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace gravmc {

namespace {

// Gauss-Legendre nodes/weights on [-1,1]
constexpr double g3x[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr double g3w[3] = {0.5555555555555556, 0.8888888888888888, 0.5555555555555556};
constexpr double g5x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                           0.5384693101056831, 0.9061798459386640};
constexpr double g5w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                           0.4786286704993665, 0.2369268850561891};

struct Cell2 {
    double x0, x1, y0, y1;
    double val, err;
};

struct Cell3 {
    double x0, x1, y0, y1, z0, z1;
    double val, err;
};

template <int N>
double tensor2(const std::function<double(double, double)>& f, const Cell2& c,
               const double* gx, const double* gw) {
    const double cx = 0.5 * (c.x0 + c.x1), hx = 0.5 * (c.x1 - c.x0);
    const double cy = 0.5 * (c.y0 + c.y1), hy = 0.5 * (c.y1 - c.y0);
    double s = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            s += gw[i] * gw[j] * f(cx + hx * gx[i], cy + hy * gx[j]);
    return s * hx * hy;
}

template <int N>
double tensor3(const std::function<double(double, double, double)>& f, const Cell3& c,
               const double* gx, const double* gw) {
    const double cx = 0.5 * (c.x0 + c.x1), hx = 0.5 * (c.x1 - c.x0);
    const double cy = 0.5 * (c.y0 + c.y1), hy = 0.5 * (c.y1 - c.y0);
    const double cz = 0.5 * (c.z0 + c.z1), hz = 0.5 * (c.z1 - c.z0);
    double s = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                s += gw[i] * gw[j] * gw[k] *
                     f(cx + hx * gx[i], cy + hy * gx[j], cz + hz * gx[k]);
    return s * hx * hy * hz;
}

void eval2(const std::function<double(double, double)>& f, Cell2& c) {
    const double coarse = tensor2<3>(f, c, g3x, g3w);
    c.val = tensor2<5>(f, c, g5x, g5w);
    c.err = std::abs(c.val - coarse);
}

void eval3(const std::function<double(double, double, double)>& f, Cell3& c) {
    const double coarse = tensor3<3>(f, c, g3x, g3w);
    c.val = tensor3<5>(f, c, g5x, g5w);
    c.err = std::abs(c.val - coarse);
}

} // namespace

double adaptive_quad_2d(const std::function<double(double, double)>& f, double x0,
                        double x1, double y0, double y1, double abs_tol, int max_splits) {
    auto cmp = [](const Cell2& a, const Cell2& b) { return a.err < b.err; };
    std::priority_queue<Cell2, std::vector<Cell2>, decltype(cmp)> q(cmp);
    Cell2 root{x0, x1, y0, y1, 0, 0};
    eval2(f, root);
    double total = root.val, toterr = root.err;
    q.push(root);
    for (int it = 0; it < max_splits && toterr > abs_tol && !q.empty(); ++it) {
        const Cell2 c = q.top();
        q.pop();
        total -= c.val;
        toterr -= c.err;
        const double mx = 0.5 * (c.x0 + c.x1), my = 0.5 * (c.y0 + c.y1);
        Cell2 kids[4] = {{c.x0, mx, c.y0, my}, {mx, c.x1, c.y0, my},
                         {c.x0, mx, my, c.y1}, {mx, c.x1, my, c.y1}};
        for (Cell2& k : kids) {
            eval2(f, k);
            total += k.val;
            toterr += k.err;
            q.push(k);
        }
    }
    return total;
}

double adaptive_quad_3d(const std::function<double(double, double, double)>& f, double x0,
                        double x1, double y0, double y1, double z0, double z1,
                        double abs_tol, int max_splits) {
    auto cmp = [](const Cell3& a, const Cell3& b) { return a.err < b.err; };
    std::priority_queue<Cell3, std::vector<Cell3>, decltype(cmp)> q(cmp);
    Cell3 root{x0, x1, y0, y1, z0, z1, 0, 0};
    eval3(f, root);
    double total = root.val, toterr = root.err;
    q.push(root);
    for (int it = 0; it < max_splits && toterr > abs_tol && !q.empty(); ++it) {
        const Cell3 c = q.top();
        q.pop();
        total -= c.val;
        toterr -= c.err;
        const double mx = 0.5 * (c.x0 + c.x1);
        const double my = 0.5 * (c.y0 + c.y1);
        const double mz = 0.5 * (c.z0 + c.z1);
        for (int b = 0; b < 8; ++b) {
            Cell3 k{b & 1 ? mx : c.x0, b & 1 ? c.x1 : mx, b & 2 ? my : c.y0,
                    b & 2 ? c.y1 : my, b & 4 ? mz : c.z0, b & 4 ? c.z1 : mz};
            eval3(f, k);
            total += k.val;
            toterr += k.err;
            q.push(k);
        }
    }
    return total;
}

} // namespace gravmc
