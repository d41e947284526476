#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "eqharm/hopf.hpp"
#include "eqharm/mesh.hpp"
#include "eqharm/rng.hpp"

using namespace eqharm;

namespace {
constexpr double kPi = 3.14159265358979323846;

CartesianPoint random_point(RandomStream& rng) {
    return normalized({rng.complex_normal(), rng.complex_normal()});
}
}  // namespace

TEST_CASE("hopf_to_cartesian pinned values") {
    auto close = [](const CartesianPoint& p, Complex z1, Complex z2) {
        CHECK(std::abs(p.z1 - z1) < 1e-12);
        CHECK(std::abs(p.z2 - z2) < 1e-12);
    };
    close(hopf_to_cartesian({kPi / 2, 0, 0}), 1.0, 0.0);
    close(hopf_to_cartesian({0, 0, kPi / 2}), 0.0, Complex(0, 1));
    close(hopf_to_cartesian({kPi / 4, 0, 0}), 1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
}

TEST_CASE("circle_action basics and Hopf-coordinate equivalence") {
    const CartesianPoint a = circle_action({1.0, 0.0}, kPi);
    CHECK(std::abs(a.z1 - Complex(-1.0)) < 1e-15);
    const CartesianPoint b = circle_action({0.0, 1.0}, kPi / 2);
    CHECK(std::abs(b.z2 - Complex(0, 1)) < 1e-15);

    RandomStream rng(7);
    for (int i = 0; i < 20; ++i) {
        const HopfPoint p{rng.uniform() * kPi / 2, rng.uniform() * 2 * kPi,
                          rng.uniform() * 2 * kPi - kPi};
        const double vartheta = rng.uniform() * 2 * kPi;
        const CartesianPoint lhs = circle_action(hopf_to_cartesian(p), vartheta);
        const CartesianPoint rhs =
            hopf_to_cartesian({p.alpha, p.phi, p.theta + vartheta});
        CHECK(std::abs(lhs.z1 - rhs.z1) < 1e-12);
        CHECK(std::abs(lhs.z2 - rhs.z2) < 1e-12);
    }
}

TEST_CASE("hopf_projection pinned values and circle invariance") {
    CHECK((hopf_projection({1.0, 0.0}) - SpherePoint(0, 0, 1)).norm() < 1e-12);
    CHECK((hopf_projection({0.0, 1.0}) - SpherePoint(0, 0, -1)).norm() < 1e-12);
    const double r = 1 / std::sqrt(2.0);
    CHECK((hopf_projection({r, r}) - SpherePoint(1, 0, 0)).norm() < 1e-12);

    RandomStream rng(11);
    for (int i = 0; i < 50; ++i) {
        const CartesianPoint p = random_point(rng);
        const double vartheta = rng.uniform() * 2 * kPi;
        CHECK((hopf_projection(circle_action(p, vartheta)) - hopf_projection(p)).norm() <
              1e-12);
    }
}

TEST_CASE("hopf_projection in Hopf coordinates (doubled angles)") {
    RandomStream rng(13);
    for (int i = 0; i < 50; ++i) {
        const double alpha = rng.uniform() * kPi / 2;
        const double phi = rng.uniform() * kPi;
        const double theta = rng.uniform() * 2 * kPi - kPi;
        const SpherePoint n = hopf_projection(hopf_to_cartesian({alpha, phi, theta}));
        CHECK((n - base_point(alpha, phi)).norm() < 1e-12);
    }
}

TEST_CASE("coordinate round trip away from the degenerate loci") {
    RandomStream rng(17);
    for (int i = 0; i < 200; ++i) {
        const double alpha = 0.05 + (kPi / 2 - 0.1) * rng.uniform();
        const double phi = rng.uniform() * kPi;  // canonical half-domain
        const double theta = rng.uniform() * 2 * kPi - kPi;
        const CartesianPoint p = hopf_to_cartesian({alpha, phi, theta});
        const HopfChartResult back = cartesian_to_hopf(p);
        CHECK(!back.degenerate);
        CHECK(std::abs(back.point.alpha - alpha) < 1e-10);
        CHECK(std::abs(back.point.phi - phi) < 1e-10);
        // θ agrees modulo 2π.
        const double dtheta =
            std::remainder(back.point.theta - theta, 2 * kPi);
        CHECK(std::abs(dtheta) < 1e-10);
        // And the round trip through the chart is the identity on S³.
        const CartesianPoint q = hopf_to_cartesian(back.point);
        CHECK(std::abs(q.z1 - p.z1) < 1e-12);
        CHECK(std::abs(q.z2 - p.z2) < 1e-12);
    }
    // Degenerate loci produce a flagged canonical representative.
    CHECK(cartesian_to_hopf({1.0, 0.0}).degenerate);
    CHECK(cartesian_to_hopf({0.0, 1.0}).degenerate);
}

TEST_CASE("fiber through a point is a great circle in the dot product") {
    const CartesianPoint x = hopf_to_cartesian({kPi / 4, 0, 0});
    RandomStream rng(19);
    for (int i = 0; i < 20; ++i) {
        const double theta = rng.uniform() * 2 * kPi;
        const CartesianPoint y = hopf_to_cartesian({kPi / 4, 0, theta});
        CHECK(std::abs(dot4(x, y) - std::cos(theta)) < 1e-12);
    }
}

TEST_CASE("quaternion multiplication: unit norm, associativity, circle action") {
    RandomStream rng(23);
    for (int i = 0; i < 20; ++i) {
        const CartesianPoint x = random_point(rng);
        const CartesianPoint q = random_point(rng);
        const CartesianPoint r = random_point(rng);
        const CartesianPoint xq = quaternion_right_multiply(x, q);
        CHECK(std::abs(xq.norm_sq() - 1.0) < 1e-12);
        const CartesianPoint a =
            quaternion_right_multiply(quaternion_right_multiply(x, q), r);
        const CartesianPoint b =
            quaternion_right_multiply(x, quaternion_right_multiply(q, r));
        CHECK(std::abs(a.z1 - b.z1) < 1e-12);
        CHECK(std::abs(a.z2 - b.z2) < 1e-12);
        // Right action commutes with the circle (= left) action.
        const double t = rng.uniform() * 2 * kPi;
        const CartesianPoint c = quaternion_right_multiply(circle_action(x, t), q);
        const CartesianPoint d = circle_action(quaternion_right_multiply(x, q), t);
        CHECK(std::abs(c.z1 - d.z1) < 1e-12);
        CHECK(std::abs(c.z2 - d.z2) < 1e-12);
    }
}

TEST_CASE("sphere triangulation: counts, Euler characteristic, closedness") {
    const SphereTriangulation level0 = triangulate_sphere3(0);
    CHECK(level0.vertices.size() == 8);
    CHECK(level0.tetrahedra.size() == 16);
    MeshCensus c0 = census(level0);
    CHECK(c0.closed);
    CHECK(c0.euler_characteristic() == 0);

    for (int level : {1, 2, 3}) {
        const SphereTriangulation mesh = triangulate_sphere3(level);
        CHECK(mesh.tetrahedra.size() == 16u << (3 * level));
        const MeshCensus c = census(mesh);
        CHECK(c.closed);
        CHECK(c.euler_characteristic() == 0);
        for (const auto& v : mesh.vertices) {
            CHECK(std::abs(v.norm_sq() - 1.0) < 1e-12);
        }
    }
    CHECK_THROWS_AS(triangulate_sphere3(3, 2), std::length_error);
}

TEST_CASE("triangulation is deterministic") {
    const SphereTriangulation a = triangulate_sphere3(2);
    const SphereTriangulation b = triangulate_sphere3(2);
    REQUIRE(a.tetrahedra.size() == b.tetrahedra.size());
    for (std::size_t i = 0; i < a.tetrahedra.size(); ++i) {
        CHECK(a.tetrahedra[i] == b.tetrahedra[i]);
    }
}
