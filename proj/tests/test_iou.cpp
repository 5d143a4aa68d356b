#include <cmath>

#include "doctest.h"
#include "scene3d/iou.hpp"
#include "scene3d/pose.hpp"
#include "scene3d/rng.hpp"
#include "support/oracles.hpp"

using namespace scene3d;

TEST_CASE("intersection_volume of a box with itself is its volume") {
    Xoshiro256 rng(61);
    for (int i = 0; i < 50; ++i) {
        const OrientedBox3D box = oracle::random_box(rng);
        CHECK(intersection_volume(box, box) == doctest::Approx(box_volume(box)).epsilon(1e-9));
    }
}

TEST_CASE("far apart boxes do not intersect") {
    const OrientedBox3D a{{0, 0, 0}, {1, 1, 1}, {0, 0, 0}};
    const OrientedBox3D b{{10, 0, 0}, {1, 1, 1}, {0, 0, 0}};
    CHECK(intersection_volume(a, b) == 0.0);
    CHECK(iou_3d(a, b) == 0.0);
}

TEST_CASE("unit cube vs its pi/4-yawed copy has the analytic octagon volume") {
    const OrientedBox3D a{{0, 0, 0}, {1, 1, 1}, {0, 0, 0}};
    const OrientedBox3D b{{0, 0, 0}, {1, 1, 1}, {M_PI / 4, 0, 0}};
    const double analytic = 2.0 * (std::sqrt(2.0) - 1.0);
    CHECK(intersection_volume(a, b) == doctest::Approx(analytic).epsilon(1e-9));
    CHECK(iou_3d(a, b) == doctest::Approx(analytic / (2.0 - analytic)).epsilon(1e-9));
    // cross-check against the sampling oracle
    CHECK(std::abs(oracle::mc_iou(a, b, 2'000'000, 99) - iou_3d(a, b)) <= 0.01);
}

TEST_CASE("identical boxes give IoU 1, half-offset unit cubes give 1/3") {
    Xoshiro256 rng(67);
    const OrientedBox3D box = oracle::random_box(rng);
    CHECK(iou_3d(box, box) == doctest::Approx(1.0).epsilon(1e-9));

    const OrientedBox3D a{{0, 0, 0}, {1, 1, 1}, {0, 0, 0}};
    const OrientedBox3D b{{0.5, 0, 0}, {1, 1, 1}, {0, 0, 0}};
    CHECK(iou_3d(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("degenerate boxes are legal and score zero") {
    const OrientedBox3D flat{{0, 0, 0}, {0, 1, 1}, {0.2, 0.1, 0}};
    const OrientedBox3D cube{{0, 0, 0}, {1, 1, 1}, {0, 0, 0}};
    CHECK(intersection_volume(flat, cube) == 0.0);
    CHECK(iou_3d(flat, cube) == 0.0);
    CHECK(iou_3d(flat, flat) == 0.0);  // union volume 0
}

TEST_CASE("IoU is symmetric") {
    Xoshiro256 rng(71);
    for (int i = 0; i < 200; ++i) {
        const OrientedBox3D a = oracle::random_box(rng);
        OrientedBox3D b = oracle::random_box(rng);
        b.center = a.center + Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        CHECK(std::abs(iou_3d(a, b) - iou_3d(b, a)) <= 1e-9);
    }
}

TEST_CASE("intersection volume is bounded by both volumes") {
    Xoshiro256 rng(73);
    for (int i = 0; i < 200; ++i) {
        const OrientedBox3D a = oracle::random_box(rng);
        OrientedBox3D b = oracle::random_box(rng);
        b.center = a.center + Vec3{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                                   rng.uniform(-0.5, 0.5)};
        const double inter = intersection_volume(a, b);
        CHECK(inter >= 0.0);
        CHECK(inter <= std::min(box_volume(a), box_volume(b)) + 1e-12);
    }
}

TEST_CASE("zero-angle IoU matches the closed-form axis-aligned value") {
    Xoshiro256 rng(79);
    for (int i = 0; i < 500; ++i) {
        OrientedBox3D a = oracle::random_box(rng);
        OrientedBox3D b = oracle::random_box(rng);
        a.angles = b.angles = {0, 0, 0};
        b.center = a.center + Vec3{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                                   rng.uniform(-1.5, 1.5)};
        CHECK(std::abs(iou_3d(a, b) - oracle::aabb_iou(a, b)) <= 1e-9);
    }
}

TEST_CASE("IoU is scale equivariant") {
    Xoshiro256 rng(83);
    for (int i = 0; i < 100; ++i) {
        const OrientedBox3D a = oracle::random_box(rng);
        OrientedBox3D b = oracle::random_box(rng);
        b.center = a.center + Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const double s = rng.uniform(0.2, 5.0);
        OrientedBox3D sa = a, sb = b;
        sa.center = a.center * s;
        sa.size = a.size * s;
        sb.center = b.center * s;
        sb.size = b.size * s;
        CHECK(std::abs(iou_3d(a, b) - iou_3d(sa, sb)) <= 1e-9);
    }
}

TEST_CASE("IoU is invariant under a shared rigid transform") {
    Xoshiro256 rng(89);
    for (int i = 0; i < 100; ++i) {
        const OrientedBox3D a = oracle::random_box(rng);
        OrientedBox3D b = oracle::random_box(rng);
        b.center = a.center + Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const Pose pose = oracle::random_pose(rng);
        CHECK(std::abs(iou_3d(a, b) - iou_3d(transform_box(a, pose), transform_box(b, pose))) <=
              1e-9);
    }
}

TEST_CASE("clipping agrees with the Monte-Carlo oracle on random pairs") {
    Xoshiro256 rng(97);
    int with_overlap = 0;
    for (int i = 0; i < 150; ++i) {
        const OrientedBox3D a = oracle::random_box(rng);
        OrientedBox3D b = oracle::random_box(rng);
        b.center = a.center + Vec3{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                                   rng.uniform(-1.0, 1.0)};
        const double exact = iou_3d(a, b);
        const double sampled = oracle::mc_iou(a, b, 200'000, 1000 + static_cast<uint64_t>(i));
        CHECK(std::abs(exact - sampled) <= 0.02);  // 2e5 samples; acceptance runs 2e6
        if (exact > 0) ++with_overlap;
    }
    CHECK(with_overlap > 50);
}

TEST_CASE("touching, nested and coincident boxes") {
    SUBCASE("cubes sharing a face intersect with zero volume") {
        const OrientedBox3D a{{0, 0, 0}, {1, 1, 1}, {0, 0, 0}};
        const OrientedBox3D b{{1.0, 0, 0}, {1, 1, 1}, {0, 0, 0}};
        CHECK(intersection_volume(a, b) <= 1e-12);
        CHECK(iou_3d(a, b) <= 1e-12);
    }
    SUBCASE("a contained box intersects with exactly its own volume") {
        Xoshiro256 rng(211);
        for (int i = 0; i < 50; ++i) {
            const OrientedBox3D outer = oracle::random_box(rng, 1.0, 1.0, 2.0);
            OrientedBox3D inner = outer;
            inner.size = outer.size * rng.uniform(0.1, 0.9);
            CHECK(intersection_volume(outer, inner) ==
                  doctest::Approx(box_volume(inner)).epsilon(1e-9));
            CHECK(iou_3d(outer, inner) ==
                  doctest::Approx(box_volume(inner) / box_volume(outer)).epsilon(1e-9));
        }
    }
    SUBCASE("coincident rotated boxes have IoU 1") {
        Xoshiro256 rng(223);
        for (int i = 0; i < 50; ++i) {
            const OrientedBox3D box = oracle::random_box(rng);
            CHECK(iou_3d(box, box) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    SUBCASE("needle-shaped boxes stay within oracle reach") {
        const OrientedBox3D needle{{0, 0, 0}, {10.0, 0.01, 0.01}, {0.3, 0.2, 0.1}};
        const OrientedBox3D cube{{0, 0, 0}, {1, 1, 1}, {0, 0, 0}};
        const double exact = iou_3d(needle, cube);
        CHECK(exact > 0.0);
        CHECK(exact < 1.0);
        const double inter = intersection_volume(needle, cube);
        CHECK(inter <= box_volume(needle) + 1e-15);
        // sample inside the needle so the estimate converges
        const double mc = oracle::mc_intersection_volume(needle, cube, 400'000, 227);
        CHECK(std::abs(inter - mc) <= 0.05 * box_volume(needle) + 1e-9);
    }
    SUBCASE("same-center random rotations agree with the sampling oracle") {
        Xoshiro256 rng(229);
        for (int i = 0; i < 30; ++i) {
            OrientedBox3D a = oracle::random_box(rng, 0.0, 0.5, 1.5);
            OrientedBox3D b = a;
            b.angles = {rng.uniform(-M_PI, M_PI), rng.uniform(-M_PI, M_PI),
                        rng.uniform(-M_PI, M_PI)};
            const double exact = iou_3d(a, b);
            const double mc = oracle::mc_iou(a, b, 300'000, 233 + static_cast<uint64_t>(i));
            CHECK(std::abs(exact - mc) <= 0.02);
        }
    }
}

TEST_CASE("polytope plumbing: box polytope volume matches the box") {
    Xoshiro256 rng(101);
    for (int i = 0; i < 50; ++i) {
        const OrientedBox3D box = oracle::random_box(rng);
        CHECK(polytope_volume(polytope_from_box(box)) ==
              doctest::Approx(box_volume(box)).epsilon(1e-9));
    }
}

TEST_CASE("clip_polytope halves a cube through its middle") {
    const OrientedBox3D box{{0, 0, 0}, {2, 2, 2}, {0, 0, 0}};
    const ConvexPolytope half = clip_polytope(polytope_from_box(box), {{1, 0, 0}, 0.0});
    CHECK(polytope_volume(half) == doctest::Approx(4.0).epsilon(1e-12));
    const ConvexPolytope none = clip_polytope(polytope_from_box(box), {{1, 0, 0}, -3.0});
    CHECK(none.empty());
    const ConvexPolytope all = clip_polytope(polytope_from_box(box), {{1, 0, 0}, 3.0});
    CHECK(polytope_volume(all) == doctest::Approx(8.0).epsilon(1e-12));
}
