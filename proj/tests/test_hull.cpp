#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "polylab/body.hpp"
#include "polylab/hull.hpp"
#include "polylab/rng.hpp"

using namespace polylab;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<Vec2> random_points_in_disc(Rng& rng, int n, double R = 1.0) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    while (static_cast<int>(pts.size()) < n) {
        const Vec2 p{rng.uniform(-R, R), rng.uniform(-R, R)};
        if (norm2(p) <= R * R) pts.push_back(p);
    }
    return pts;
}

std::multiset<std::pair<double, double>> vertex_set(const Polytope& p) {
    std::multiset<std::pair<double, double>> s;
    for (const Vec2& v : p.verts2) s.insert({v.x, v.y});
    return s;
}
}  // namespace

TEST_CASE("hull absorbs interior points") {
    const std::vector<Vec2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
    const auto h = convex_hull2(pts);
    CHECK(h.verts2.size() == 4);
    CHECK(!h.degenerate);
    CHECK(polytope_volume(h) == doctest::Approx(1.0).epsilon(1e-14));
    // Provenance excludes the interior point (index 4).
    for (int idx : h.provenance) CHECK(idx != 4);
}

TEST_CASE("triangle and degenerate inputs") {
    const std::vector<Vec2> tri{{0, 0}, {1, 0}, {0, 1}};
    const auto h = convex_hull2(tri);
    CHECK(h.verts2.size() == 3);
    CHECK(polytope_volume(h) == doctest::Approx(0.5).epsilon(1e-14));

    const std::vector<Vec2> collinear{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    const auto d = convex_hull2(collinear);
    CHECK(d.degenerate);
    CHECK(polytope_volume(d) == 0.0);
}

TEST_CASE("regular n-gon area") {
    const int n = 6;
    std::vector<Vec2> pts;
    for (int i = 0; i < n; ++i) pts.push_back(dir(2.0 * kPi * i / n));
    const auto h = convex_hull2(pts);
    CHECK(polytope_volume(h) == doctest::Approx(0.5 * n * std::sin(2.0 * kPi / n)).epsilon(1e-13));
    CHECK(polytope_volume(h) == doctest::Approx(3.0 * std::sqrt(3.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("monte carlo sanity: hull area grows toward the disc") {
    Rng rng(11);
    double prev_mean = 0.0;
    for (int n : {64, 256, 1024}) {
        double mean = 0.0;
        const int reps = 40;
        for (int r = 0; r < reps; ++r) {
            const auto pts = random_points_in_disc(rng, n);
            const double a = polytope_volume(convex_hull2(pts));
            CHECK(a < kPi);
            mean += a / reps;
        }
        CHECK(mean > prev_mean);
        prev_mean = mean;
    }
}

TEST_CASE("hull properties: idempotence, permutation invariance, monotonicity") {
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        auto pts = random_points_in_disc(rng, 200);
        const auto h1 = convex_hull2(pts);
        const auto h2 = convex_hull2(h1.verts2);
        CHECK(vertex_set(h1) == vertex_set(h2));

        // Permutation invariance.
        std::vector<Vec2> shuffled = pts;
        for (size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
        CHECK(vertex_set(convex_hull2(shuffled)) == vertex_set(h1));

        // Monotonicity under adding points.
        auto more = pts;
        const auto extra = random_points_in_disc(rng, 50);
        more.insert(more.end(), extra.begin(), extra.end());
        CHECK(polytope_volume(convex_hull2(more)) >= polytope_volume(h1) - 1e-14);
    }
}

TEST_CASE("clip halfspace") {
    const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto square = convex_hull2(sq);
    const HalfSpace h{{1.0, 0.0}, 0.5};
    const auto clipped = clip_halfspace(square, h);
    CHECK(polytope_volume(clipped) == doctest::Approx(0.5).epsilon(1e-14));

    const HalfSpace all{{1.0, 0.0}, 2.0};  // square entirely in H-
    CHECK(polytope_volume(clip_halfspace(square, all)) == doctest::Approx(1.0).epsilon(1e-14));

    const HalfSpace none{{1.0, 0.0}, -2.0};  // empty intersection
    const auto empty = clip_halfspace(square, none);
    CHECK(empty.verts2.empty());

    // Disc proxy clipped at offset 0.5 leaves pi minus the segment.
    const auto body = SmoothBody::disc(1.0);
    Polytope disc;
    disc.dim = 2;
    disc.verts2 = body.proxy();
    const double seg = std::acos(0.5) - 0.5 * std::sqrt(0.75);
    CHECK(polytope_volume(clip_halfspace(disc, HalfSpace{{1, 0}, 0.5}))
          == doctest::Approx(kPi - seg).epsilon(1e-5));
}

TEST_CASE("fan decomposition") {
    const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    auto square = convex_hull2(sq);
    const auto fd = fan_decomposition(square, square.verts2[0]);
    CHECK(fd.simplices.size() == 2);
    double sum = 0.0;
    for (const auto& s : fd.simplices) sum += s.area();
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

    // Hexagon about its centroid.
    std::vector<Vec2> hex;
    for (int i = 0; i < 6; ++i) hex.push_back(dir(2.0 * kPi * i / 6));
    const auto hh = convex_hull2(hex);
    CHECK(fan_decomposition(hh, {0, 0}).simplices.size() == 6);

    // Random 100-gon: simplex areas match the shoelace area to 1e-12 relative.
    Rng rng(33);
    const auto pts = random_points_in_disc(rng, 400);
    const auto h = convex_hull2(pts);
    const auto f2 = fan_decomposition(h, h.verts2[0]);
    double s2 = 0.0;
    for (const auto& s : f2.simplices) s2 += s.area();
    CHECK(std::abs(s2 - polytope_volume(h)) <= 1e-12 * polytope_volume(h));
}

TEST_CASE("ring insertion") {
    Rng rng(44);
    const auto pts = random_points_in_disc(rng, 300);
    auto h = convex_hull2(pts);
    // Inserting any existing interior sample leaves the ring untouched.
    std::vector<Vec2> ring = h.verts2;
    CHECK(!insert_into_ring(ring, {0.01, -0.02}));
    CHECK(ring.size() == h.verts2.size());
    // Inserting a far point extends the hull and matches a recomputation.
    const Vec2 far{2.0, 0.3};
    CHECK(insert_into_ring(ring, far));
    auto all = pts;
    all.push_back(far);
    CHECK(vertex_set(convex_hull2(all)) == vertex_set(convex_hull2(ring)));
}

TEST_CASE("3D hull: tetrahedron, cube, ball") {
    const std::vector<Vec3> tet{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto h = convex_hull3(tet);
    CHECK(h.facets.size() == 4);
    CHECK(polytope_volume(h) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(euler_characteristic(h) == 2);

    std::vector<Vec3> cube;
    for (int i = 0; i < 8; ++i) cube.push_back({static_cast<double>(i & 1), static_cast<double>((i >> 1) & 1),
                                                static_cast<double>((i >> 2) & 1)});
    cube.push_back({0.5, 0.5, 0.5});
    const auto hc = convex_hull3(cube);
    CHECK(hc.verts3.size() == 8);
    CHECK(polytope_volume(hc) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(euler_characteristic(hc) == 2);

    Rng rng(55);
    std::vector<Vec3> ball;
    while (ball.size() < 600) {
        const Vec3 p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
        if (dot(p, p) <= 1.0) ball.push_back(p);
    }
    const auto hb = convex_hull3(ball);
    CHECK(!hb.degenerate);
    CHECK(euler_characteristic(hb) == 2);
    const double vol = polytope_volume(hb);
    CHECK(vol > 3.0);
    CHECK(vol < 4.0 * kPi / 3.0);
    // Every input point lies inside (orientation check against all facets).
    for (const auto& f : hb.facets) {
        const Vec3 a = hb.verts3[f[0]], b = hb.verts3[f[1]], c = hb.verts3[f[2]];
        const Vec3 nrm = cross(b - a, c - a);
        for (const auto& p : ball) CHECK(dot(p - a, nrm) <= 1e-9);
    }

    const std::vector<Vec3> flat{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0.5, 0.5, 0}};
    CHECK(convex_hull3(flat).degenerate);
}
