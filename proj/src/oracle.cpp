#include "gravmc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gravmc/quadrature.hpp"

namespace gravmc {

namespace {

// Corner antiderivative of the 1/r volume integral over a box. The arctan
// terms must stay odd in their arguments so the branch contributions cancel
// across the eight corners; that rules out atan2 here.
double corner_term(double x, double y, double z) {
    const double r = std::sqrt(x * x + y * y + z * z);
    auto ln_term = [r](double coeff, double w, double q) {
        // coeff * log(w + r); for w < 0 use (r^2 - w^2)/(r - w) to avoid
        // cancellation, with q = r^2 - w^2 supplied by the caller
        if (coeff == 0.0) return 0.0;
        if (w > 0.0) return coeff * std::log(w + r);
        if (q <= 0.0) return 0.0;
        return coeff * (std::log(q) - std::log(r - w));
    };
    auto at_term = [](double coeff, double num, double den) {
        if (coeff == 0.0) return 0.0;
        if (den == 0.0) {
            if (num == 0.0) return 0.0;
            return coeff * (num > 0 ? 1.5707963267948966 : -1.5707963267948966);
        }
        return coeff * std::atan(num / den);
    };
    double t = 0;
    t += ln_term(x * y, z, x * x + y * y);
    t += ln_term(y * z, x, y * y + z * z);
    t += ln_term(z * x, y, z * z + x * x);
    t -= at_term(0.5 * x * x, y * z, x * r);
    t -= at_term(0.5 * y * y, x * z, y * r);
    t -= at_term(0.5 * z * z, x * y, z * r);
    return t;
}

} // namespace

double prism_potential(const Prism& pr, Vec3d p, double G) {
    double s = 0;
    const double xs[2] = {pr.min_corner.x - p.x, pr.max_corner.x - p.x};
    const double ys[2] = {pr.min_corner.y - p.y, pr.max_corner.y - p.y};
    const double zs[2] = {pr.min_corner.z - p.z, pr.max_corner.z - p.z};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                const double sign = ((i + j + k) & 1) ? 1.0 : -1.0;
                s += sign * corner_term(xs[i], ys[j], zs[k]);
            }
    return G * pr.density * s;
}

namespace {

// corner-singular box [0,a]x[0,b]x[0,c], field point at the origin:
// the three Duffy pyramids reduce exactly to smooth 2D integrals,
//   I = abc/2 * sum over axis-major pyramids of
//       int_0^1 int_0^1 dv dw / sqrt(major^2 + s^2 v^2 + t^2 w^2)
double corner_box_integral(double a, double b, double c, double abs_tol, int max_splits) {
    auto piece = [&](double major, double s, double t) {
        return adaptive_quad_2d(
            [=](double v, double w) {
                return 1.0 / std::sqrt(major * major + s * s * v * v + t * t * w * w);
            },
            0, 1, 0, 1, abs_tol / (1.5 * a * b * c), max_splits);
    };
    return 0.5 * a * b * c * (piece(a, b, c) + piece(b, a, c) + piece(c, a, b));
}

} // namespace

double prism_potential_quad(const Prism& pr, Vec3d p, double G, const QuadratureSpec& spec) {
    const Vec3d lo = pr.min_corner, hi = pr.max_corner;
    const bool inside = p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
                        p.z >= lo.z && p.z <= hi.z;

    // rough magnitude for converting the relative tolerance into an absolute
    // budget: GM / max(dist, quarter diagonal)
    const Vec3d mid = 0.5 * (lo + hi);
    const Vec3d ext = hi - lo;
    const double vol = ext.x * ext.y * ext.z;
    const double dist = std::max(norm(p - mid), 0.25 * norm(ext));
    const double rough = std::abs(G * pr.density) * vol / dist;
    const double abs_tol = spec.target_rel_tol * rough;

    double integral = 0;
    if (inside) {
        // split at p: each nonempty sub-box has the singularity at a corner
        const double xs[3] = {lo.x, p.x, hi.x};
        const double ys[3] = {lo.y, p.y, hi.y};
        const double zs[3] = {lo.z, p.z, hi.z};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) {
                    const double a = xs[i + 1] - xs[i];
                    const double b = ys[j + 1] - ys[j];
                    const double c = zs[k + 1] - zs[k];
                    if (a <= 0 || b <= 0 || c <= 0) continue;
                    integral += corner_box_integral(a, b, c, abs_tol / 8.0,
                                                    spec.max_subdivisions);
                }
    } else {
        integral = adaptive_quad_3d(
            [&](double x, double y, double z) {
                const double dx = x - p.x, dy = y - p.y, dz = z - p.z;
                return 1.0 / std::sqrt(dx * dx + dy * dy + dz * dz);
            },
            lo.x, hi.x, lo.y, hi.y, lo.z, hi.z, abs_tol, spec.max_subdivisions);
    }
    return G * pr.density * integral;
}

double prism_gz(const Prism& pr, Vec3d p, double dz, double G) {
    if (!(dz > 0)) throw std::invalid_argument("prism_gz: dz must be > 0");
    const Vec3d up{p.x, p.y, p.z + dz};
    const Vec3d dn{p.x, p.y, p.z - dz};
    return (prism_potential(pr, up, G) - prism_potential(pr, dn, G)) / (2.0 * dz);
}

double scene_potential(const Scene& s, Vec3d p) {
    if (s.background_density != 0.0)
        throw std::domain_error(
            "scene_potential: analytic truth covers prisms over a zero background only");
    double u = 0;
    for (const Prism& pr : s.prisms) u += prism_potential(pr, p, s.gravitational_constant);
    return u;
}

double scene_gz(const Scene& s, Vec3d p, double dz) {
    if (s.background_density != 0.0)
        throw std::domain_error(
            "scene_gz: analytic truth covers prisms over a zero background only");
    double g = 0;
    for (const Prism& pr : s.prisms) g += prism_gz(pr, p, dz, s.gravitational_constant);
    return g;
}

double boundary_error_estimate(const Scene& s) {
    return s.gravitational_constant * total_anomalous_mass(s) / s.domain.radius;
}

double mean_exit_time(const BallDomain& d, Vec3d x0, double length_scale) {
    const double r2 = norm2(x0 - d.center);
    const double R2 = d.radius * d.radius;
    if (r2 > R2) throw std::invalid_argument("mean_exit_time: x0 outside the ball");
    const double L2 = length_scale * length_scale;
    return (R2 - r2) / (6.0 * L2);
}

} // namespace gravmc
