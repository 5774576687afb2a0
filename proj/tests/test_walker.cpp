#include <cmath>
#include <cstring>

#include <doctest.h>

#include "gravmc/oracle.hpp"
#include "gravmc/walker.hpp"

using namespace gravmc;

namespace {

Scene unit_ball_scene(double radius_internal, double density = 0.0) {
    Scene s;
    s.length_scale = 1.0;
    s.domain = {{0, 0, 0}, radius_internal};
    if (density != 0.0) {
        const double a = 0.5 * radius_internal;
        s.prisms.push_back({{-a, -a, -a}, {a, a, a}, density});
    }
    return s;
}

Scene paper_scene(double length_scale = 100.0) {
    Scene s;
    s.domain = {{0, 0, 0}, 10000.0};
    s.prisms.push_back({{0, 0, 0}, {100, 100, 100}, 2000.0});
    s.length_scale = length_scale;
    return s;
}

} // namespace

TEST_CASE("step: forced increments") {
    CHECK(step_with({1, 2, 3}, 0.1, {0, 0, 0}) == Vec3d{1, 2, 3});
    // sqrt(2 * 0.5) = 1
    CHECK(step_with({1, 2, 3}, 0.5, {1, 0, 0}) == Vec3d{2, 2, 3});
    CHECK_THROWS_AS(step({0, 0, 0}, 0.0, *new RandomStream(1, 1)), std::invalid_argument);
}

TEST_CASE("step: increment variance matches 2 dt over many draws") {
    const double dt = 0.07;
    RandomStream rs(31337, 9);
    const int n = 1'000'000;
    double sx = 0, sxx = 0;
    Vec3d pos{0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const Vec3d next = step(pos, dt, rs);
        const double inc = next.x - pos.x;
        sx += inc;
        sxx += inc * inc;
        pos = next;
    }
    const double var = sxx / n - (sx / n) * (sx / n);
    CHECK(var == doctest::Approx(2.0 * dt).epsilon(0.01));
}

TEST_CASE("bridge_exit_probability") {
    CHECK(bridge_exit_probability(0.0, 1.0, 0.5) == 1.0);
    CHECK(bridge_exit_probability(1.0, 1.0, 1.0) == doctest::Approx(std::exp(-1.0)));
    CHECK(bridge_exit_probability(50.0, 50.0, 0.01) == doctest::Approx(0.0));
    CHECK_THROWS_AS(bridge_exit_probability(1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(bridge_exit_probability(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("run_walk: zero-density scene accumulates nothing") {
    const Scene s = unit_ball_scene(1.0);
    WalkerParams p{.dt = 0.01};
    for (std::uint64_t i = 0; i < 50; ++i) {
        const WalkResult r = run_walk(s, {0.1, 0, 0}, p, RandomStream(5, i));
        REQUIRE(r.integral == 0.0);
        REQUIRE(r.steps > 0);
        REQUIRE(r.exit_time == doctest::Approx(r.steps * p.dt));
        // exit point sits on the sphere
        REQUIRE(norm(r.exit_point) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("run_walk: start on the boundary exits immediately, outside throws") {
    const Scene s = unit_ball_scene(1.0);
    WalkerParams p{.dt = 0.01};
    const WalkResult r = run_walk(s, {1.0, 0, 0}, p, RandomStream(1, 0));
    CHECK(r.steps == 0);
    CHECK(r.exit_time == 0.0);
    CHECK(r.integral == 0.0);
    CHECK_FALSE(r.truncated);
    CHECK_THROWS_AS(run_walk(s, {1.5, 0, 0}, p, RandomStream(1, 0)), std::invalid_argument);
}

TEST_CASE("run_walk: bitwise replay determinism") {
    const Scene s = paper_scene();
    WalkerParams p{.dt = 0.1};
    const WalkResult a = run_walk(s, {50, 50, 200}, p, RandomStream(77, 13));
    const WalkResult b = run_walk(s, {50, 50, 200}, p, RandomStream(77, 13));
    CHECK(a.integral == b.integral);
    CHECK(a.exit_time == b.exit_time);
    CHECK(a.steps == b.steps);
    CHECK(a.exit_point == b.exit_point);
}

TEST_CASE("run_walk: integral is exactly linear under density doubling") {
    Scene s1 = paper_scene();
    Scene s2 = paper_scene();
    s2.prisms[0].density = 4000.0;
    WalkerParams p{.dt = 0.1};
    for (std::uint64_t i = 0; i < 200; ++i) {
        const WalkResult a = run_walk(s1, {50, 50, 150}, p, RandomStream(123, i));
        const WalkResult b = run_walk(s2, {50, 50, 150}, p, RandomStream(123, i));
        REQUIRE(b.integral == 2.0 * a.integral);
        REQUIRE(a.steps == b.steps);
    }
}

TEST_CASE("run_walk: truncation is flagged") {
    const Scene s = unit_ball_scene(1.0);
    WalkerParams p{.dt = 1e-6, .max_steps = 10};
    const WalkResult r = run_walk(s, {0, 0, 0}, p, RandomStream(9, 9));
    CHECK(r.truncated);
    CHECK(r.steps == 10);
}

TEST_CASE("run_walk: nonnegative integrals for nonnegative density") {
    const Scene s = paper_scene();
    WalkerParams p{.dt = 0.1};
    for (std::uint64_t i = 0; i < 2000; ++i) {
        const WalkResult r = run_walk(s, {50, 50, 120}, p, RandomStream(2029, i));
        REQUIRE(r.integral >= 0.0);
    }
}

TEST_CASE("run_walk: mean exit time matches the ball oracle with bridge on") {
    const Scene s = unit_ball_scene(1.0);
    // dt = 0.002 <= 0.01 R^2; expectation R^2/6
    WalkerParams p{.dt = 0.002, .bridge_enabled = true};
    const std::int64_t n = 100000;
    double sum = 0, sumsq = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const WalkResult r =
            run_walk(s, {0, 0, 0}, p, RandomStream(4242, static_cast<std::uint64_t>(i)));
        sum += r.exit_time;
        sumsq += r.exit_time * r.exit_time;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    const double expect = mean_exit_time(s.domain, {0, 0, 0}, s.length_scale);
    CHECK(expect == doctest::Approx(1.0 / 6.0));
    CHECK(std::abs(mean - expect) < 3.0 * se);
}

TEST_CASE("run_walk: bridge can only shorten walks on average") {
    const Scene s = unit_ball_scene(1.0);
    const std::int64_t n = 20000;
    double with = 0, without = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        WalkerParams pb{.dt = 0.01, .bridge_enabled = true};
        WalkerParams pn{.dt = 0.01, .bridge_enabled = false};
        with += run_walk(s, {0.3, 0, 0}, pb, RandomStream(88, i)).exit_time;
        without += run_walk(s, {0.3, 0, 0}, pn, RandomStream(88, i)).exit_time;
    }
    CHECK(with / n <= without / n);
}

TEST_CASE("run_walk: mean step count scales like R^2") {
    const double dt = 0.005;
    const std::int64_t n = 20000;
    double steps1 = 0, steps2 = 0;
    const Scene s1 = unit_ball_scene(1.0);
    const Scene s2 = unit_ball_scene(2.0);
    WalkerParams p{.dt = dt};
    for (std::int64_t i = 0; i < n; ++i) {
        steps1 += double(run_walk(s1, {0, 0, 0}, p, RandomStream(3001, i)).steps);
        steps2 += double(run_walk(s2, {0, 0, 0}, p, RandomStream(3002, i)).steps);
    }
    const double ratio = steps2 / steps1;
    CHECK(ratio > 4.0 * 0.9);
    CHECK(ratio < 4.0 * 1.1);
}

TEST_CASE("run_walk: clipped exit integral stays between zero and the full term") {
    Scene s = unit_ball_scene(1.0, 1000.0);
    // source fills a cube around the center; walks started inside it
    WalkerParams full{.dt = 0.02, .clip_exit_integral = false};
    WalkerParams clip{.dt = 0.02, .clip_exit_integral = true};
    double sum_full = 0, sum_clip = 0;
    for (std::uint64_t i = 0; i < 5000; ++i) {
        sum_full += run_walk(s, {0, 0, 0}, full, RandomStream(606, i)).integral;
        sum_clip += run_walk(s, {0, 0, 0}, clip, RandomStream(606, i)).integral;
    }
    CHECK(sum_clip <= sum_full);
    CHECK(sum_clip > 0.9 * sum_full); // the exit step is a small share here
}
