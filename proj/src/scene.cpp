#include "gravmc/scene.hpp"

#include <cmath>
#include <numbers>

namespace gravmc {

bool contains(const BallDomain& d, Vec3d p) {
    return norm2(p - d.center) < d.radius * d.radius;
}

bool prism_contains(const Prism& pr, Vec3d p) {
    return p.x >= pr.min_corner.x && p.x < pr.max_corner.x &&
           p.y >= pr.min_corner.y && p.y < pr.max_corner.y &&
           p.z >= pr.min_corner.z && p.z < pr.max_corner.z;
}

double density_at(const Scene& s, Vec3d p) {
    for (const Prism& pr : s.prisms)
        if (prism_contains(pr, p)) return s.background_density + pr.density;
    return s.background_density;
}

double source_term(const Scene& s, Vec3d p) {
    const double rho = density_at(s, p);
    if (rho == 0.0) return 0.0;
    // association fixed as (4*pi*G*rho) * (L*L) so that the L^2 scaling law
    // holds bitwise against an L=1 scene
    const double base = 4.0 * std::numbers::pi * s.gravitational_constant * rho;
    return base * (s.length_scale * s.length_scale);
}

double total_anomalous_mass(const Scene& s) {
    double m = 0;
    for (const Prism& pr : s.prisms) {
        const Vec3d d = pr.max_corner - pr.min_corner;
        m += pr.density * d.x * d.y * d.z;
    }
    return m;
}

std::vector<std::string> scene_errors(const Scene& s) {
    std::vector<std::string> errs;
    if (!(s.domain.radius > 0)) errs.push_back("scene.ball.radius_m must be > 0");
    if (!(s.length_scale > 0)) errs.push_back("scene.length_scale_m must be > 0");
    if (!std::isfinite(s.background_density))
        errs.push_back("scene.background_density must be finite");
    if (!(s.gravitational_constant > 0))
        errs.push_back("scene.gravitational_constant must be > 0");
    for (std::size_t i = 0; i < s.prisms.size(); ++i) {
        const Prism& pr = s.prisms[i];
        const std::string tag = "scene.prisms[" + std::to_string(i) + "]";
        if (!(pr.min_corner.x < pr.max_corner.x && pr.min_corner.y < pr.max_corner.y &&
              pr.min_corner.z < pr.max_corner.z))
            errs.push_back(tag + ": min_corner_m must be componentwise below max_corner_m");
        if (!std::isfinite(pr.density)) errs.push_back(tag + ": density must be finite");
        // strict containment: every corner closer to the center than R
        for (int c = 0; c < 8; ++c) {
            const Vec3d corner{c & 1 ? pr.max_corner.x : pr.min_corner.x,
                               c & 2 ? pr.max_corner.y : pr.min_corner.y,
                               c & 4 ? pr.max_corner.z : pr.min_corner.z};
            if (norm(corner - s.domain.center) >= s.domain.radius) {
                errs.push_back(tag + ": prism must lie strictly inside the ball domain");
                break;
            }
        }
    }
    return errs;
}

template <class Real>
WalkScene<Real> make_walk_scene(const Scene& s) {
    WalkScene<Real> w;
    const double L = s.length_scale;
    w.center = {static_cast<Real>(s.domain.center.x / L),
                static_cast<Real>(s.domain.center.y / L),
                static_cast<Real>(s.domain.center.z / L)};
    w.radius = static_cast<Real>(s.domain.radius / L);
    w.radius2 = w.radius * w.radius;
    const double base = 4.0 * std::numbers::pi * s.gravitational_constant;
    const double l2 = L * L;
    w.source_background =
        s.background_density == 0.0
            ? Real(0)
            : static_cast<Real>((base * s.background_density) * l2);
    for (const Prism& pr : s.prisms) {
        typename WalkScene<Real>::PrismData q;
        q.lo_x = static_cast<Real>(pr.min_corner.x / L);
        q.lo_y = static_cast<Real>(pr.min_corner.y / L);
        q.lo_z = static_cast<Real>(pr.min_corner.z / L);
        q.hi_x = static_cast<Real>(pr.max_corner.x / L);
        q.hi_y = static_cast<Real>(pr.max_corner.y / L);
        q.hi_z = static_cast<Real>(pr.max_corner.z / L);
        const double rho = s.background_density + pr.density;
        q.source = rho == 0.0 ? Real(0) : static_cast<Real>((base * rho) * l2);
        w.prisms.push_back(q);
    }
    return w;
}

template struct WalkScene<double>;
template struct WalkScene<float>;
template WalkScene<double> make_walk_scene<double>(const Scene&);
template WalkScene<float> make_walk_scene<float>(const Scene&);

} // namespace gravmc
