#include "gravmc/walker.hpp"

#include <cmath>
#include <stdexcept>

namespace gravmc {

std::int64_t auto_max_steps(const Scene& s, double dt) {
    const double r = s.domain.radius / s.length_scale;
    const double cap = 100.0 * r * r / (6.0 * dt);
    return static_cast<std::int64_t>(std::ceil(cap));
}

Vec3d step_with(Vec3d pos, double dt, Vec3d w) {
    const double a = std::sqrt(2.0 * dt);
    return {pos.x + a * w.x, pos.y + a * w.y, pos.z + a * w.z};
}

Vec3d step(Vec3d pos, double dt, RandomStream& stream) {
    if (!(dt > 0)) throw std::invalid_argument("step: dt must be > 0");
    std::uint64_t raw[4];
    stream.fill_raw(raw, 2);
    double n[4];
    normal_batch(raw, n, 2);
    return step_with(pos, dt, {n[0], n[1], n[2]});
}

double bridge_exit_probability(double d_in, double d_out_prev, double dt) {
    if (!(dt > 0)) throw std::invalid_argument("bridge_exit_probability: dt must be > 0");
    if (d_in < 0 || d_out_prev < 0)
        throw std::invalid_argument("bridge_exit_probability: distances must be >= 0");
    return std::exp(-d_in * d_out_prev / dt);
}

namespace {

// forward intersection of the segment a->b (extended if needed) with the
// sphere |p - c| = R; returns a + t*(b-a)
template <class Real>
Vec3<Real> sphere_crossing(Vec3<Real> a, Vec3<Real> b, Vec3<Real> c, Real radius2) {
    const Vec3<Real> d = b - a;
    const Vec3<Real> m = a - c;
    const Real dd = dot(d, d);
    if (dd == Real(0)) return b;
    const Real md = dot(m, d);
    const Real disc = md * md - dd * (dot(m, m) - radius2);
    const Real root = disc > Real(0) ? std::sqrt(disc) : Real(0);
    const Real t = (-md + root) / dd;
    return {a.x + t * d.x, a.y + t * d.y, a.z + t * d.z};
}

} // namespace

template <class Real>
WalkResult run_walk_internal(const WalkScene<Real>& ws, Vec3<Real> x0,
                             const WalkerParams& p, NormalSource<Real>& ns) {
    const Real r2start = norm2(x0 - ws.center);
    if (r2start > ws.radius2)
        throw std::invalid_argument("run_walk: start point outside the domain");

    WalkResult res;
    res.exit_point = {double(x0.x), double(x0.y), double(x0.z)};
    if (r2start == ws.radius2) return res; // already on the boundary

    const Real dt = static_cast<Real>(p.dt);
    const Real half_dt = dt / Real(2);
    const Real sqrt2dt = std::sqrt(Real(2) * dt);
    const std::int64_t max_steps = p.max_steps;

    Vec3<Real> pos = x0;
    Real integral = 0;
    Real f_prev = ws.source_at(pos);
    Real d_prev = p.bridge_enabled ? ws.radius - std::sqrt(r2start) : Real(0);

    for (std::int64_t n = 1; n <= max_steps; ++n) {
        const Vec3<Real> w = ns.next3();
        const Vec3<Real> prev = pos;
        pos.x += sqrt2dt * w.x;
        pos.y += sqrt2dt * w.y;
        pos.z += sqrt2dt * w.z;

        const Real f_new = ws.source_at(pos);
        const Real term = half_dt * (f_prev + f_new);
        const Real r2 = norm2(pos - ws.center);

        if (r2 >= ws.radius2) {
            const Vec3<Real> hit = sphere_crossing(prev, pos, ws.center, ws.radius2);
            if (p.clip_exit_integral) {
                const Real seg2 = norm2(pos - prev);
                const Real frac =
                    seg2 > Real(0) ? std::sqrt(norm2(hit - prev) / seg2) : Real(1);
                integral += half_dt * (f_prev + ws.source_at(hit)) * frac;
            } else {
                integral += term;
            }
            res.integral = double(integral);
            res.steps = n;
            res.exit_time = double(n) * p.dt;
            res.exit_point = {double(hit.x), double(hit.y), double(hit.z)};
            return res;
        }

        integral += term;

        if (p.bridge_enabled) {
            const Real d_new = ws.radius - std::sqrt(r2);
            const Real pc = std::exp(-d_prev * d_new / dt);
            if (static_cast<Real>(ns.next_unit()) < pc) {
                const Vec3<Real> hit = sphere_crossing(prev, pos, ws.center, ws.radius2);
                res.integral = double(integral);
                res.steps = n;
                res.exit_time = double(n) * p.dt;
                res.exit_point = {double(hit.x), double(hit.y), double(hit.z)};
                return res;
            }
            d_prev = d_new;
        }
        f_prev = f_new;
    }

    res.integral = double(integral);
    res.steps = max_steps;
    res.exit_time = double(max_steps) * p.dt;
    res.exit_point = {double(pos.x), double(pos.y), double(pos.z)};
    res.truncated = true;
    return res;
}

template WalkResult run_walk_internal<double>(const WalkScene<double>&, Vec3<double>,
                                              const WalkerParams&, NormalSource<double>&);
template WalkResult run_walk_internal<float>(const WalkScene<float>&, Vec3<float>,
                                             const WalkerParams&, NormalSource<float>&);

WalkResult run_walk(const Scene& s, Vec3d x0, const WalkerParams& p,
                    const RandomStream& stream) {
    if (!(p.dt > 0)) throw std::invalid_argument("run_walk: dt must be > 0");
    WalkerParams q = p;
    if (q.max_steps <= 0) q.max_steps = auto_max_steps(s, q.dt);
    const WalkScene<double> ws = make_walk_scene<double>(s);
    NormalSource<double> ns(stream.seed(), stream.stream_id());
    const double L = s.length_scale;
    WalkResult r = run_walk_internal<double>(ws, {x0.x / L, x0.y / L, x0.z / L}, q, ns);
    r.exit_point = {r.exit_point.x * L, r.exit_point.y * L, r.exit_point.z * L};
    return r;
}

} // namespace gravmc
