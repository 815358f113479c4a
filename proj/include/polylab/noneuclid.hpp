#pragma once

#include <memory>
#include <span>
#include <vector>

#include "polylab/body.hpp"
#include "polylab/geometry.hpp"

namespace polylab {

// Point on the open upper half-sphere S^2_+ (unit norm, z > 0); renormalized
// on construction, constraint residual below 1e-12.
struct SpherePoint {
    Vec3 v;
    explicit SpherePoint(Vec3 p);
};

// Point on the hyperboloid x∘x = -1, z > 0 in Lorentz-Minkowski R^{2,1}.
struct HyperboloidPoint {
    Vec3 v;
    explicit HyperboloidPoint(Vec3 p);
};

// Central projection g(x) = x/(x.e3) - e3 and its inverse lift.
Vec2 gnomonic_sphere(const SpherePoint& x);
SpherePoint gnomonic_sphere_inv(Vec2 y);

// Hyperbolic analogue h(x) = x/(x∘e3) + e3; image lies in the open unit disc.
Vec2 gnomonic_hyper(const HyperboloidPoint& x);
HyperboloidPoint gnomonic_hyper_inv(Vec2 y);

// Geodesic polygon areas by the angle-sum (Gauss-Bonnet) formulas; vertices in
// counterclockwise order, spherical ones within an open half-sphere.
double spherical_polygon_area(std::span<const SpherePoint> verts);
double hyperbolic_polygon_area(std::span<const HyperboloidPoint> verts);

struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;  // row-major [[a,b],[c,d]]
    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    double det() const { return a * d - b * c; }
    Mat2 inverse() const;
};

// Hilbert geometry on the interior of a strictly convex body C. The ambient
// body may carry an affine placement (used by the projective-invariance
// tests); chord endpoints come from closed forms for disc/ellipse and from
// angular bisection (tolerance 1e-12) otherwise.
class HilbertDomain {
public:
    explicit HilbertDomain(SmoothBody C, int grid_m = 1024);

    static std::shared_ptr<const HilbertDomain> parse(const std::string& body_id, int grid_m = 1024);

    // The same geometry carried through x -> A x + shift.
    HilbertDomain transformed(const Mat2& A, Vec2 shift) const;

    const SmoothBody& body() const { return C_; }
    int grid_m() const { return grid_m_; }
    const std::string& id() const { return C_.id(); }

    bool contains(Vec2 x, double clearance = 0.0) const;

    // Largest t > 0 with x + t u on the boundary; x must be interior.
    double ray_exit(Vec2 x, Vec2 u) const;

    // Cross-ratio metric d_C. Symmetric, 0 iff x == y.
    double hilbert_distance(Vec2 x, Vec2 y) const;

    // Radial function of the harmonic-symmetrization ball B_{C,x}:
    // rho(u) = 2 t+ t- / (t+ + t-).
    double harmonic_ball_radial(Vec2 x, Vec2 u) const;

    // Raw (unnormalized) volume densities; d = 2 only.
    double busemann_raw(Vec2 x) const;          // Vol(B^2) / Vol(B_{C,x})
    double holmes_thompson_raw(Vec2 x) const;   // Vol(B_{C,x}°) / Vol(B^2)

    // Both densities from one shared radial grid (saves the ray exits).
    void densities_raw(Vec2 x, double& busemann, double& holmes_thompson) const;

private:
    void harmonic_profile(Vec2 x, std::vector<double>& rho) const;
    double ray_exit_canonical(Vec2 x, Vec2 u) const;  // in the body's own frame

    SmoothBody C_;
    int grid_m_;
    bool affine_ = false;
    Mat2 fwd_, inv_;
    Vec2 shift_{0.0, 0.0};
    std::vector<Vec2> hull_cache_;  // transformed proxy for containment tests
};

}  // namespace polylab
