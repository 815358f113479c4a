#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "polylab/geometry.hpp"

namespace polylab {

enum class BodyKind { Disc, Ellipse, Fourier, Ball3, Ellipsoid3 };

// A smooth convex body. Planar bodies are given by their support function
// h(theta) and must have radius of curvature h + h'' > 0 everywhere (checked
// on a fine angle grid at construction); 3D bodies are restricted to balls and
// ellipsoids with implicit membership tests. Immutable after construction.
class SmoothBody {
public:
    // Parses zoo identifiers: "disc:R", "ellipse:a:b", "fourier:h0:eps:k",
    // "ball3:R", "ellipsoid3:a:b:c".
    static SmoothBody parse(const std::string& id);

    static SmoothBody disc(double radius);
    static SmoothBody ellipse(double a, double b);
    static SmoothBody fourier(double h0, double eps, int k);
    static SmoothBody ball3(double radius);
    static SmoothBody ellipsoid3(double a, double b, double c);

    int dimension() const { return dim_; }
    BodyKind kind() const { return kind_; }
    const std::string& id() const { return id_; }

    // --- 2D support function machinery ---
    double support(double theta) const;
    double support_d1(double theta) const;
    double support_d2(double theta) const;
    double curvature_radius(double theta) const { return support(theta) + support_d2(theta); }
    double curvature(double theta) const { return 1.0 / curvature_radius(theta); }

    // Boundary point with outward normal (cos theta, sin theta).
    Vec2 boundary_point(double theta) const;

    // \int_0^{2pi} g(x(theta), kappa(theta)) * (h + h'') dtheta, composite
    // Gauss-Legendre. Defaults: 512 panels of order 8.
    double boundary_integral(const std::function<double(Vec2, double)>& g,
                             int panels = 512, int order = 8) const;

    // Exact area/perimeter of the smooth body (2D) or volume (3D).
    double area() const;
    double perimeter() const;

    // Cap K ∩ {x : (x - z).n_z >= -t} at the boundary point with normal angle
    // theta_z, area computed from the smooth boundary (arc + chord), not the
    // polygonal proxy. 2D only.
    double cap_area_exact(double theta_z, double t) const;

    // Dense inscribed polygon used for all clipping-based measures. The
    // default resolution (4096 vertices, built at construction) is the proxy
    // every measure-level tolerance refers to.
    const std::vector<Vec2>& proxy() const { return proxy_; }
    std::vector<Vec2> make_proxy(int vertices) const;
    double proxy_area() const { return proxy_area_; }

    bool contains(Vec2 p, double eps = 0.0) const;
    bool contains3(Vec3 p) const;

    // Axis-aligned bounding box (2D) / box (3D), exact from the support data.
    void bounding_box(Vec2& lo, Vec2& hi) const;
    void bounding_box3(Vec3& lo, Vec3& hi) const;

    double ball3_radius() const { return params_[0]; }
    Vec3 ellipsoid_axes() const { return {params_[0], params_[1], params_[2]}; }
    double volume3() const;

private:
    SmoothBody() = default;
    void finish_2d();  // builds proxy, checks curvature positivity

    BodyKind kind_ = BodyKind::Disc;
    int dim_ = 2;
    double params_[3] = {1.0, 0.0, 0.0};
    int fourier_k_ = 0;
    std::string id_;
    std::vector<Vec2> proxy_;
    double proxy_area_ = 0.0;
};

// Measure of the cap K ∩ H+(u, t) under the weight w, in [0, 1]; implemented
// by clipping the polygonal proxy. Declared here, defined with the weights
// module (it needs weighted integration).
class WeightFunction;
double cap_measure(const SmoothBody& body, const WeightFunction& w, Vec2 u, double t);

}  // namespace polylab
