#include <cmath>
#include <vector>

#include "doctest.h"
#include "polylab/hull.hpp"
#include "polylab/noneuclid.hpp"
#include "polylab/rng.hpp"
#include "polylab/weights.hpp"

using namespace polylab;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::shared_ptr<SmoothBody> make(const char* id) { return std::make_shared<SmoothBody>(SmoothBody::parse(id)); }

Polytope random_polygon_in_disc(Rng& rng, int npts, double R) {
    std::vector<Vec2> pts;
    while (static_cast<int>(pts.size()) < npts) {
        const Vec2 p{rng.uniform(-R, R), rng.uniform(-R, R)};
        if (norm2(p) <= R * R) pts.push_back(p);
    }
    return convex_hull2(pts);
}
}  // namespace

TEST_CASE("gnomonic projections: fixed values and round trips") {
    CHECK(norm(gnomonic_sphere(SpherePoint({0, 0, 1}))) == doctest::Approx(0.0).epsilon(1e-15));
    const Vec2 g = gnomonic_sphere(SpherePoint({1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)}));
    CHECK(g.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.y == doctest::Approx(0.0).epsilon(1e-14));

    CHECK(norm(gnomonic_hyper(HyperboloidPoint({0, 0, 1}))) == doctest::Approx(0.0).epsilon(1e-15));
    for (double s : {0.3, 1.0, 2.5}) {
        const Vec2 h = gnomonic_hyper(HyperboloidPoint({std::sinh(s), 0.0, std::cosh(s)}));
        CHECK(h.x == doctest::Approx(-std::tanh(s)).epsilon(1e-13));
        CHECK(h.y == doctest::Approx(0.0).epsilon(1e-14));
    }

    Rng rng(17);
    for (int i = 0; i < 10000; ++i) {
        const Vec2 y{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Vec2 back = gnomonic_sphere(gnomonic_sphere_inv(y));
        CHECK(norm(back - y) < 1e-12 * (1.0 + norm(y)));

        const double r = std::sqrt(rng.uniform()) * 0.999;
        const Vec2 z = dir(rng.uniform(0, 2 * kPi)) * r;
        const HyperboloidPoint hp = gnomonic_hyper_inv(z);
        CHECK(std::abs(lorentz(hp.v, hp.v) + 1.0) < 1e-12);
        const Vec2 back2 = gnomonic_hyper(hp);
        CHECK(norm(back2 - z) < 1e-12);
        CHECK(norm(back2) < 1.0);
    }

    CHECK_THROWS(SpherePoint({1, 0, 0}));          // equator excluded
    CHECK_THROWS(SpherePoint({0, 0, -1}));
    CHECK_THROWS(gnomonic_hyper_inv({1.0, 0.0}));  // boundary of the disc
}

TEST_CASE("octant triangle area is pi/2") {
    // Three mutually orthogonal unit vectors, all with z = 1/sqrt(3) > 0.
    std::vector<SpherePoint> tri;
    for (int i = 0; i < 3; ++i) {
        const double phi = 2.0 * kPi * i / 3.0;
        tri.emplace_back(Vec3{std::sqrt(2.0 / 3.0) * std::cos(phi), std::sqrt(2.0 / 3.0) * std::sin(phi),
                              1.0 / std::sqrt(3.0)});
    }
    CHECK(spherical_polygon_area(tri) == doctest::Approx(kPi / 2.0).epsilon(1e-12));
}

TEST_CASE("small polygons approach their Euclidean projections") {
    const std::vector<Vec2> base{{0.02, 0.01}, {-0.015, 0.018}, {-0.01, -0.02}, {0.017, -0.012}};
    for (double eps : {1.0, 0.25, 0.05}) {
        std::vector<SpherePoint> sp;
        std::vector<HyperboloidPoint> hp;
        std::vector<Vec2> planar;
        for (const Vec2& v : base) {
            planar.push_back(v * eps);
            sp.push_back(gnomonic_sphere_inv(v * eps));
            hp.push_back(gnomonic_hyper_inv(v * eps));
        }
        const double ae = polygon_area(planar);
        CHECK(spherical_polygon_area(sp) == doctest::Approx(ae).epsilon(3.0 * eps * eps * 0.002 + 1e-9));
        CHECK(hyperbolic_polygon_area(hp) == doctest::Approx(ae).epsilon(3.0 * eps * eps * 0.002 + 1e-9));
    }
}

TEST_CASE("pushforward identities for projected polytopes") {
    // The heart of the reduction: non-Euclidean polygon areas equal weighted
    // Euclidean integrals of the projections, to 1e-6 relative.
    Rng rng(29);
    auto K = make("disc:0.8");
    auto sph = WeightFunction::spherical(K);
    auto hyp = WeightFunction::hyperbolic(K);
    for (int trial = 0; trial < 40; ++trial) {
        const Polytope poly = random_polygon_in_disc(rng, 32, 0.8);

        std::vector<SpherePoint> sp;
        for (const Vec2& v : poly.verts2) sp.push_back(gnomonic_sphere_inv(v));
        const double area_s = spherical_polygon_area(sp);
        const double psi_s = sph.raw_integral(poly.verts2);
        CHECK(std::abs(area_s - psi_s) <= 1e-6 * area_s);

        std::vector<HyperboloidPoint> hpv;
        for (const Vec2& v : poly.verts2) hpv.push_back(gnomonic_hyper_inv(v));
        const double area_h = hyperbolic_polygon_area(hpv);
        const double psi_h = hyp.raw_integral(poly.verts2);
        CHECK(std::abs(area_h - psi_h) <= 1e-6 * area_h);

        // Hyperbolic areas stay below the (k-2)pi defect bound.
        CHECK(area_h < (static_cast<double>(hpv.size()) - 2.0) * kPi);
    }
}

TEST_CASE("hilbert distance on the disc") {
    HilbertDomain C(SmoothBody::disc(1.0));
    CHECK(C.hilbert_distance({0.3, -0.2}, {0.3, -0.2}) == 0.0);
    for (double r : {0.1, 0.5, 0.9}) {
        CHECK(C.hilbert_distance({0, 0}, {r, 0}) == doctest::Approx(std::atanh(r)).epsilon(1e-12));
    }
    CHECK_THROWS(C.hilbert_distance({1.5, 0.0}, {0.0, 0.0}));

    // Symmetry and triangle inequality on sampled triples.
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        const auto pt = [&]() { return dir(rng.uniform(0, 2 * kPi)) * (0.95 * std::sqrt(rng.uniform())); };
        const Vec2 a = pt(), b = pt(), c = pt();
        const double ab = C.hilbert_distance(a, b);
        CHECK(ab == doctest::Approx(C.hilbert_distance(b, a)).epsilon(1e-12));
        CHECK(ab <= C.hilbert_distance(a, c) + C.hilbert_distance(c, b) + 1e-10);
    }
}

TEST_CASE("hilbert distance is invariant under affine maps of the picture") {
    HilbertDomain C(SmoothBody::disc(1.0));
    const Mat2 A{1.7, 0.4, -0.2, 0.9};
    const Vec2 shift{0.3, -1.1};
    const HilbertDomain CA = C.transformed(A, shift);
    Rng rng(37);
    for (int i = 0; i < 100; ++i) {
        const auto pt = [&]() { return dir(rng.uniform(0, 2 * kPi)) * (0.9 * std::sqrt(rng.uniform())); };
        const Vec2 x = pt(), y = pt();
        const double d0 = C.hilbert_distance(x, y);
        const double d1 = CA.hilbert_distance(A.apply(x) + shift, A.apply(y) + shift);
        CHECK(std::abs(d1 - d0) <= 1e-10 * (1.0 + d0));
    }

    // Also for an ellipse domain via its bisection-free closed form.
    HilbertDomain E(SmoothBody::ellipse(1.5, 0.8));
    const HilbertDomain EA = E.transformed(A, shift);
    for (int i = 0; i < 50; ++i) {
        const Vec2 x = dir(rng.uniform(0, 2 * kPi)) * (0.5 * std::sqrt(rng.uniform()));
        const Vec2 y = dir(rng.uniform(0, 2 * kPi)) * (0.5 * std::sqrt(rng.uniform()));
        CHECK(std::abs(EA.hilbert_distance(A.apply(x) + shift, A.apply(y) + shift) - E.hilbert_distance(x, y))
              <= 1e-10 * (1.0 + E.hilbert_distance(x, y)));
    }
}

TEST_CASE("harmonic ball radial function") {
    HilbertDomain C(SmoothBody::disc(1.0));
    for (double th : {0.0, 1.0, 2.5}) CHECK(C.harmonic_ball_radial({0, 0}, dir(th)) == doctest::Approx(1.0).epsilon(1e-13));
    const double r = 0.6;
    const Vec2 x{r, 0.0};
    for (double th : {0.0, 0.4, 1.1, 2.0, 3.0}) {
        const Vec2 u = dir(th);
        const double closed = (1.0 - r * r) / std::sqrt(dot(x, u) * dot(x, u) + 1.0 - r * r);
        CHECK(C.harmonic_ball_radial(x, u) == doctest::Approx(closed).epsilon(1e-12));
    }
    // Continuity along the direction grid: max adjacent jump < 1e-3 at
    // M = 1024 for a mid-interior point, and doubling the grid halves it.
    const Vec2 mid{0.5, 0.0};
    const auto max_jump = [&](int m) {
        double prev = C.harmonic_ball_radial(mid, dir(0.0)), worst = 0.0;
        for (int i = 1; i <= m; ++i) {
            const double cur = C.harmonic_ball_radial(mid, dir(2.0 * kPi * i / m));
            worst = std::max(worst, std::abs(cur - prev));
            prev = cur;
        }
        return worst;
    };
    const double j1 = max_jump(1024);
    CHECK(j1 < 1e-3);
    CHECK(max_jump(2048) < 0.6 * j1);
}

TEST_CASE("busemann density on the disc") {
    HilbertDomain C(SmoothBody::disc(1.0));
    CHECK(C.busemann_raw({0, 0}) == doctest::Approx(1.0).epsilon(1e-10));
    // Klein-model consistency: psi_Bu(x) = (1-|x|^2)^{-3/2}, within 1e-4
    // relative across r in [0, 0.95].
    for (double r = 0.0; r <= 0.9501; r += 0.05) {
        const double expected = std::pow(1.0 - r * r, -1.5);
        CHECK(std::abs(C.busemann_raw({r, 0.0}) - expected) <= 1e-4 * expected);
    }
    // Grid convergence at r = 0.9: M -> 2M moves the value by < 1e-6.
    HilbertDomain C2(SmoothBody::disc(1.0), 2048);
    CHECK(std::abs(C.busemann_raw({0.9, 0.0}) - C2.busemann_raw({0.9, 0.0})) < 1e-6);
}

TEST_CASE("holmes-thompson density and the santalo product") {
    HilbertDomain C(SmoothBody::disc(1.0), 4096);
    CHECK(C.holmes_thompson_raw({0, 0}) == doctest::Approx(1.0).epsilon(1e-10));
    // For C = disc the harmonic ball is an ellipse: Vol(B) Vol(B°) = pi^2.
    for (double r : {0.2, 0.5, 0.8}) {
        double bu, ht;
        C.densities_raw({r, 0.0}, bu, ht);
        const double vol = kPi / bu;
        const double vol_polar = ht * kPi;
        CHECK(vol * vol_polar == doctest::Approx(kPi * kPi).epsilon(1e-6));
    }
    // Grid convergence for the polar route as well.
    HilbertDomain Ca(SmoothBody::disc(1.0), 1024), Cb(SmoothBody::disc(1.0), 2048);
    {
        const double a = Ca.holmes_thompson_raw({0.9, 0.0}), b = Cb.holmes_thompson_raw({0.9, 0.0});
        CHECK(std::abs(a - b) / b < 2e-5);
    }

    // Santalo inequality direction for a non-ellipsoidal domain.
    HilbertDomain F(SmoothBody::fourier(1.0, 0.05, 3));
    double bu, ht;
    F.densities_raw({0.3, 0.2}, bu, ht);
    CHECK((kPi / bu) * (ht * kPi) <= kPi * kPi * (1.0 + 1e-6));
}
