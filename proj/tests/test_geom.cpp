#include <cmath>

#include "doctest.h"
#include "polylab/body.hpp"
#include "polylab/quadrature.hpp"
#include "polylab/special.hpp"
#include "polylab/weights.hpp"

using namespace polylab;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Independent arclength oracle: parametric speed of the ellipse, adaptive
// Simpson, no support functions involved.
double ellipse_perimeter_oracle(double a, double b) {
    return adaptive_simpson(
        [&](double t) { return std::sqrt(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t)); },
        0.0, 2.0 * kPi, 1e-13);
}

double disc_segment_area(double R, double offset) {
    // Area of {x in disc(R) : x1 >= offset}.
    const double c = offset / R;
    return R * R * (std::acos(c) - c * std::sqrt(1.0 - c * c));
}
}  // namespace

TEST_CASE("boundary points of the zoo") {
    auto d = SmoothBody::disc(1.0);
    CHECK(d.boundary_point(0.0).x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.boundary_point(0.0).y == doctest::Approx(0.0).epsilon(1e-14));

    auto e = SmoothBody::ellipse(2.0, 1.0);
    const Vec2 top = e.boundary_point(kPi / 2.0);
    CHECK(top.x == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(top.y == doctest::Approx(1.0).epsilon(1e-13));

    auto f = SmoothBody::fourier(1.0, 0.05, 3);
    const Vec2 p = f.boundary_point(0.0);
    CHECK(p.x == doctest::Approx(1.05).epsilon(1e-14));
    CHECK(p.y == doctest::Approx(0.0).epsilon(1e-14));

    CHECK_THROWS(SmoothBody::ball3(1.0).boundary_point(0.0));
}

TEST_CASE("curvature") {
    CHECK(SmoothBody::disc(2.0).curvature(1.234) == doctest::Approx(0.5).epsilon(1e-14));

    auto e = SmoothBody::ellipse(2.0, 1.0);
    CHECK(e.curvature(0.0) == doctest::Approx(2.0).epsilon(1e-12));
    // Parametric cross-check kappa = ab / (a^2 sin^2 t + b^2 cos^2 t)^{3/2},
    // matching parameters through tan(t) = (b/a) tan(theta).
    const double a = 2.0, b = 1.0;
    for (double t : {0.1, 0.7, 1.3, 2.4, 4.0, 5.9}) {
        const double theta = std::atan2(a * std::sin(t), b * std::cos(t));
        const double kappa_param = a * b / std::pow(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t), 1.5);
        CHECK(e.curvature(theta) == doctest::Approx(kappa_param).epsilon(1e-10));
    }

    auto f = SmoothBody::fourier(1.0, 0.04, 3);
    for (double th : {0.0, 0.5, 2.0}) {
        const double expected = 1.0 / (1.0 + 0.04 * (1.0 - 9.0) * std::cos(3.0 * th));
        CHECK(f.curvature(th) == doctest::Approx(expected).epsilon(1e-13));
    }

    CHECK_THROWS(SmoothBody::fourier(1.0, 0.2, 3));  // eps*(k^2-1) >= h0
}

TEST_CASE("boundary integrals") {
    auto d = SmoothBody::disc(1.0);
    CHECK(d.boundary_integral([](Vec2, double) { return 1.0; }) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(d.boundary_integral([](Vec2, double k) { return std::cbrt(k); }) == doctest::Approx(2.0 * kPi).epsilon(1e-12));

    auto e = SmoothBody::ellipse(2.0, 1.0);
    const double oracle = ellipse_perimeter_oracle(2.0, 1.0);
    CHECK(oracle == doctest::Approx(9.688448).epsilon(1e-6));
    CHECK(e.perimeter() == doctest::Approx(oracle).epsilon(1e-10));

    // Perimeter of the dense proxy agrees within 1e-6 relative.
    for (const auto& body : {SmoothBody::disc(1.0), SmoothBody::ellipse(2.0, 1.0), SmoothBody::fourier(1.0, 0.05, 3)}) {
        const auto& poly = body.proxy();
        double per = 0.0;
        for (size_t i = 0; i < poly.size(); ++i) per += norm(poly[(i + 1) % poly.size()] - poly[i]);
        CHECK(std::abs(per - body.perimeter()) / body.perimeter() < 1e-6);
    }
}

TEST_CASE("proxy traces a convex curve") {
    for (const auto& body : {SmoothBody::disc(1.0), SmoothBody::ellipse(2.0, 1.0), SmoothBody::fourier(1.0, 0.05, 3)}) {
        const auto& poly = body.proxy();
        const size_t n = poly.size();
        for (size_t i = 0; i < n; ++i) {
            const Vec2 e1 = poly[(i + 1) % n] - poly[i];
            const Vec2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
            CHECK(cross(e1, e2) > 0.0);
        }
    }
}

TEST_CASE("cap measure on the disc") {
    auto K = std::make_shared<SmoothBody>(SmoothBody::disc(1.0));
    auto w = WeightFunction::uniform(K);
    const Vec2 u = dir(0.7);
    CHECK(cap_measure(*K, w, u, 0.0) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(cap_measure(*K, w, u, 1.0) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(cap_measure(*K, w, u, 0.5) == doctest::Approx(disc_segment_area(1.0, 0.5) / kPi).epsilon(1e-5));
    CHECK(cap_measure(*K, w, u, -1.5) == doctest::Approx(1.0).epsilon(1e-12));

    // Monotone nonincreasing and within [0,1].
    double prev = 1.0;
    for (double t = -1.0; t <= 1.0; t += 0.05) {
        const double m = cap_measure(*K, w, u, t);
        CHECK(m <= prev + 1e-12);
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
        prev = m;
    }
}

TEST_CASE("exact cap areas") {
    auto d = SmoothBody::disc(1.0);
    for (double t : {0.5, 0.1, 1e-2, 1e-3, 1e-5}) {
        const double closed = std::acos(1.0 - t) - (1.0 - t) * std::sqrt(2.0 * t - t * t);
        CHECK(d.cap_area_exact(0.3, t) == doctest::Approx(closed).epsilon(1e-10));
    }
    CHECK(d.cap_area_exact(1.0, 0.0) == 0.0);
    CHECK(d.cap_area_exact(1.0, 2.5) == doctest::Approx(kPi).epsilon(1e-10));

    // Against the clipped proxy for the ellipse (proxy has ~1e-6 relative
    // resolution at this cap size).
    auto e = SmoothBody::ellipse(2.0, 1.0);
    const double t = 0.2;
    const Vec2 n = dir(1.1);
    const Vec2 z = e.boundary_point(1.1);
    const double offset = dot(z, n) - t;
    const auto cap = clip_polygon(e.proxy(), -n, -offset);
    CHECK(e.cap_area_exact(1.1, t) == doctest::Approx(polygon_area(cap)).epsilon(1e-4));
}

TEST_CASE("ball volumes and ball binomials") {
    CHECK(ball_volume(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ball_volume(2) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));

    CHECK(ball_binomial(2, 1) == doctest::Approx(kPi / 2.0).epsilon(1e-13));
    CHECK(ball_binomial(2, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ball_binomial(5, 5) == doctest::Approx(1.0).epsilon(1e-13));
    for (int d = 2; d <= 9; ++d)
        for (int j = 1; j < d; ++j)
            CHECK(std::abs(ball_binomial(d, j) - ball_binomial_beta(d, j)) <= 1e-12 * ball_binomial(d, j));

    CHECK_THROWS(ball_binomial(2, 3));
    CHECK_THROWS(ball_binomial(2, -1));
}

TEST_CASE("body id round trip") {
    for (const char* id : {"disc:1", "ellipse:2:1", "fourier:1:0.05:3", "ball3:1", "ellipsoid3:1:0.8:0.6"}) {
        const auto b = SmoothBody::parse(id);
        CHECK(b.id() == id);
    }
    CHECK_THROWS(SmoothBody::parse("simplex:1"));
}
