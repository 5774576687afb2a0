#pragma once

#include <string>
#include <vector>

#include "gravmc/vec3.hpp"

namespace gravmc {

// Geometry and densities are stated in SI (meters, kg/m^3). The solver itself
// runs in internal units of `length_scale` meters; because the problem is a
// Poisson equation, rescaling lengths by L multiplies the source by L^2, and
// with that factor folded into source_term() the walk integrals come out
// directly as potential in m^2/s^2. Internal time carries units of
// length^2 (the diffusion has generator equal to the Laplacian).

struct BallDomain {
    Vec3d center{};     // m
    double radius = 0;  // m
};

// strict: a point exactly on the sphere counts as exited
bool contains(const BallDomain& d, Vec3d p);

struct Prism {
    Vec3d min_corner{};  // m
    Vec3d max_corner{};  // m
    double density = 0;  // kg/m^3, contrast against background; may be negative
};

// half-open membership [min, max): faces are assigned deterministically
bool prism_contains(const Prism& pr, Vec3d p);

struct Scene {
    BallDomain domain;
    std::vector<Prism> prisms;       // first match wins on overlap
    double background_density = 0;   // kg/m^3
    double length_scale = 1000;      // meters per internal length unit
    double gravitational_constant = 6.674e-11;
};

// background plus the density of the first prism containing p
double density_at(const Scene& s, Vec3d p);

// 4*pi*G*rho(p)*L^2 — the (sign-flipped) Poisson right-hand side in internal
// units; this is what the walker integrates along paths
double source_term(const Scene& s, Vec3d p);

// sum of prism density*volume, kg; independent of length_scale
double total_anomalous_mass(const Scene& s);

// structural checks (R > 0, corners ordered, prisms strictly inside the
// ball, ...); empty result means the scene is usable
std::vector<std::string> scene_errors(const Scene& s);

// Precompiled per-walk view in internal units with the source values baked
// in. Immutable; shared by any number of concurrent walkers.
template <class Real>
struct WalkScene {
    struct PrismData {
        Real lo_x, lo_y, lo_z;
        Real hi_x, hi_y, hi_z;
        Real source;  // 4*pi*G*density*L^2
    };
    Vec3<Real> center{};
    Real radius = 0;
    Real radius2 = 0;
    Real source_background = 0;
    std::vector<PrismData> prisms;

    Real source_at(Vec3<Real> p) const {
        for (const PrismData& q : prisms) {
            if (p.x >= q.lo_x && p.x < q.hi_x && p.y >= q.lo_y && p.y < q.hi_y &&
                p.z >= q.lo_z && p.z < q.hi_z)
                return q.source;
        }
        return source_background;
    }
};

template <class Real>
WalkScene<Real> make_walk_scene(const Scene& s);

extern template struct WalkScene<double>;
extern template struct WalkScene<float>;
extern template WalkScene<double> make_walk_scene<double>(const Scene&);
extern template WalkScene<float> make_walk_scene<float>(const Scene&);

} // namespace gravmc
