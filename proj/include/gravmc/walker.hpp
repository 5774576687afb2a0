#pragma once

#include <cstdint>

#include "gravmc/rng.hpp"
#include "gravmc/scene.hpp"
#include "gravmc/vec3.hpp"

namespace gravmc {

struct WalkerParams {
    double dt = 0.1;              // internal time units (length_scale^2 m^2)
    bool bridge_enabled = false;  // Brownian-bridge crossing test per step
    std::int64_t max_steps = 0;   // 0 => auto: 100 * R^2 / (6 dt), see below
    // When true the exiting step's trapezoid term is weighted by the
    // in-domain fraction of the segment instead of being added in full.
    // Off by default: the plain algorithm adds the full term.
    bool clip_exit_integral = false;
};

struct WalkResult {
    double integral = 0;    // accumulated path integral of source_term (SI potential)
    double exit_time = 0;   // steps * dt, internal time units
    std::int64_t steps = 0;
    Vec3d exit_point{};     // boundary crossing of the final segment, meters
    bool truncated = false; // hit max_steps before exiting
};

// default safety cap; with it the truncation probability is ~e^-150
std::int64_t auto_max_steps(const Scene& s, double dt);

// one Euler-Maruyama increment: pos + sqrt(2 dt) * w
Vec3d step_with(Vec3d pos, double dt, Vec3d w);
Vec3d step(Vec3d pos, double dt, RandomStream& stream);

// Half-space crossing probability for two consecutive in-domain positions at
// distances d_in and d_out_prev from the boundary, for a diffusion with
// variance parameter 2: exp(-d_in * d_out_prev / dt). Throws on dt <= 0.
double bridge_exit_probability(double d_in, double d_out_prev, double dt);

// Simulates one path from x0 (meters) until it first leaves the ball,
// accumulating the trapezoidal integral of source_term. The stream is used
// from block 0 of its (seed, stream_id), so identical arguments replay
// bitwise-identical results. Throws if x0 is strictly outside the ball; a
// start exactly on the sphere returns the trivial already-exited result.
WalkResult run_walk(const Scene& s, Vec3d x0, const WalkerParams& p,
                    const RandomStream& stream);

// hot path used by the estimator: internal units in, exit_point in internal
// units; wall-facing conversions happen in the wrappers
template <class Real>
WalkResult run_walk_internal(const WalkScene<Real>& ws, Vec3<Real> x0,
                             const WalkerParams& p, NormalSource<Real>& ns);

extern template WalkResult run_walk_internal<double>(const WalkScene<double>&, Vec3<double>,
                                                     const WalkerParams&, NormalSource<double>&);
extern template WalkResult run_walk_internal<float>(const WalkScene<float>&, Vec3<float>,
                                                    const WalkerParams&, NormalSource<float>&);

} // namespace gravmc
