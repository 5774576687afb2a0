#pragma once

#include "gravmc/scene.hpp"
#include "gravmc/vec3.hpp"

namespace gravmc {

struct QuadratureSpec {
    double target_rel_tol = 1e-8;
    int max_subdivisions = 200000;  // total adaptive cell splits
};

// Newtonian potential of a constant-density prism, m^2/s^2, valid inside,
// on, and outside the box (classical corner antiderivative; continuous
// across faces). Positive for positive density.
double prism_potential(const Prism& pr, Vec3d p, double G);

// Independent cross-check: adaptive volume quadrature of G*rho/|p-q|.
// Interior/face points are split at p and integrated with corner (Duffy)
// pyramid transforms that remove the 1/r singularity.
double prism_potential_quad(const Prism& pr, Vec3d p, double G,
                            const QuadratureSpec& spec = {});

// Vertical acceleration as a centered finite difference of the closed-form
// potential; dz should match the survey stencil being compared against.
double prism_gz(const Prism& pr, Vec3d p, double dz, double G);

// Superposed prism potentials; the background density must be zero (no
// closed form is kept for a dense ball).
double scene_potential(const Scene& s, Vec3d p);
double scene_gz(const Scene& s, Vec3d p, double dz);

// Expected magnitude of the constant offset a zero-Dirichlet ball solution
// carries relative to the free-space potential: G * M / R.
double boundary_error_estimate(const Scene& s);

// Exact expected first-exit time of the generator-Laplacian diffusion from
// a ball, internal time units: (R^2 - |x0 - c|^2) / 6 with lengths in units
// of length_scale. Throws if x0 is outside.
double mean_exit_time(const BallDomain& d, Vec3d x0, double length_scale);

} // namespace gravmc
