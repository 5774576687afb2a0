#include <cmath>
#include <numbers>

#include <doctest.h>

#include "gravmc/rng.hpp"
#include "gravmc/scene.hpp"

using namespace gravmc;

namespace {

Scene paper_scene(double length_scale = 100.0) {
    Scene s;
    s.domain = {{0, 0, 0}, 10000.0};
    s.prisms.push_back({{0, 0, 0}, {100, 100, 100}, 2000.0});
    s.length_scale = length_scale;
    return s;
}

} // namespace

TEST_CASE("density_at: cube membership") {
    const Scene s = paper_scene();
    CHECK(density_at(s, {50, 50, 50}) == 2000.0);
    CHECK(density_at(s, {50, 50, 150}) == 0.0);
    // half-open faces: min faces belong to the prism, max faces do not
    CHECK(density_at(s, {0, 50, 50}) == 2000.0);
    CHECK(density_at(s, {100, 50, 50}) == 0.0);
    CHECK(density_at(s, {50, 50, 100}) == 0.0);
    const Scene empty{.domain = {{0, 0, 0}, 10.0}};
    CHECK(density_at(empty, {1, 2, 3}) == 0.0);
}

TEST_CASE("density_at: first prism wins on overlap, background adds") {
    Scene s = paper_scene();
    s.prisms.push_back({{-10, -10, -10}, {60, 60, 60}, 500.0});
    CHECK(density_at(s, {50, 50, 50}) == 2000.0); // first match
    CHECK(density_at(s, {-5, -5, -5}) == 500.0);
    s.background_density = 100.0;
    CHECK(density_at(s, {50, 50, 50}) == 2100.0);
    CHECK(density_at(s, {50, 50, 500}) == 100.0);
}

TEST_CASE("density_at agrees with per-prism brute force on random points") {
    Scene s = paper_scene();
    s.prisms.push_back({{-300, -50, 20}, {-100, 80, 90}, -750.0});
    RandomStream rs(5150, 0);
    for (int i = 0; i < 100000; ++i) {
        const Vec3d p{(rs.next_unit() - 0.5) * 800, (rs.next_unit() - 0.5) * 800,
                      (rs.next_unit() - 0.5) * 800};
        double expected = s.background_density;
        for (const Prism& pr : s.prisms) {
            const bool in = p.x >= pr.min_corner.x && p.x < pr.max_corner.x &&
                            p.y >= pr.min_corner.y && p.y < pr.max_corner.y &&
                            p.z >= pr.min_corner.z && p.z < pr.max_corner.z;
            if (in) {
                expected += pr.density;
                break;
            }
        }
        REQUIRE(density_at(s, p) == expected);
    }
}

TEST_CASE("contains: strict sphere membership") {
    const BallDomain d{{0, 0, 0}, 10.0};
    CHECK(contains(d, {0, 0, 0}));
    CHECK_FALSE(contains(d, {10, 0, 0}));
    CHECK(contains(d, {9.999, 0, 0}));
    CHECK_FALSE(contains(d, {7, 7, 7}));
}

TEST_CASE("contains is monotone in the radial distance") {
    const BallDomain d{{1, -2, 3}, 5.0};
    RandomStream rs(99, 1);
    for (int i = 0; i < 20000; ++i) {
        Vec3d dir{rs.next_unit() - 0.5, rs.next_unit() - 0.5, rs.next_unit() - 0.5};
        const double n = norm(dir);
        if (n == 0) continue;
        dir = (1.0 / n) * dir;
        const double r1 = rs.next_unit() * 8.0;
        const double r2 = r1 + rs.next_unit() * 4.0;
        const Vec3d p = d.center + r1 * dir;
        const Vec3d q = d.center + r2 * dir;
        if (!contains(d, p)) REQUIRE_FALSE(contains(d, q));
    }
}

TEST_CASE("source_term values and exact L^2 scaling") {
    Scene s1 = paper_scene(1.0);
    const double expect = 4.0 * std::numbers::pi * 6.674e-11 * 2000.0;
    CHECK(source_term(s1, {50, 50, 50}) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(source_term(s1, {50, 50, 50}) == doctest::Approx(1.6774e-6).epsilon(1e-3));
    CHECK(source_term(s1, {50, 50, 150}) == 0.0);

    const Scene sk = paper_scene(1000.0);
    const double L2 = 1000.0 * 1000.0;
    RandomStream rs(7, 0);
    for (int i = 0; i < 1000; ++i) {
        const Vec3d p{rs.next_unit() * 200 - 50, rs.next_unit() * 200 - 50,
                      rs.next_unit() * 200 - 50};
        REQUIRE(source_term(sk, p) == source_term(s1, p) * L2);
    }
    CHECK(source_term(sk, {50, 50, 50}) == doctest::Approx(1.6774).epsilon(1e-3));
}

TEST_CASE("total_anomalous_mass") {
    Scene s = paper_scene();
    CHECK(total_anomalous_mass(s) == doctest::Approx(2.0e9).epsilon(1e-12));
    const Scene empty{.domain = {{0, 0, 0}, 10.0}};
    CHECK(total_anomalous_mass(empty) == 0.0);
    s.prisms.push_back({{200, 200, 200}, {300, 300, 300}, 2000.0});
    CHECK(total_anomalous_mass(s) == doctest::Approx(4.0e9).epsilon(1e-12));
}

TEST_CASE("scene_errors flags bad scenes") {
    Scene s = paper_scene();
    CHECK(scene_errors(s).empty());

    Scene bad_r = s;
    bad_r.domain.radius = 0;
    CHECK_FALSE(scene_errors(bad_r).empty());

    Scene bad_prism = s;
    bad_prism.prisms[0].min_corner = {10, 10, 10};
    bad_prism.prisms[0].max_corner = {9, 9, 9};
    CHECK_FALSE(scene_errors(bad_prism).empty());

    Scene outside = s;
    outside.prisms[0].max_corner = {11000, 100, 100};
    bool found = false;
    for (const auto& e : scene_errors(outside))
        found = found || e.find("prisms[0]") != std::string::npos;
    CHECK(found);
}

TEST_CASE("walk scene mirrors the SI scene in internal units") {
    const Scene s = paper_scene(100.0);
    const auto w = make_walk_scene<double>(s);
    CHECK(w.radius == doctest::Approx(100.0));
    RandomStream rs(11, 3);
    for (int i = 0; i < 5000; ++i) {
        const Vec3d pm{rs.next_unit() * 300 - 100, rs.next_unit() * 300 - 100,
                       rs.next_unit() * 300 - 100};
        const Vec3<double> pi{pm.x / 100.0, pm.y / 100.0, pm.z / 100.0};
        REQUIRE(w.source_at(pi) == doctest::Approx(source_term(s, pm)).epsilon(1e-12));
    }
}
