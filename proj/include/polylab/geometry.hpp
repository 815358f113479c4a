#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace polylab {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 perp(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 normalized(Vec2 a) {
    double n = norm(a);
    return {a.x / n, a.y / n};
}
inline Vec2 dir(double theta) { return {std::cos(theta), std::sin(theta)}; }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// Lorentz product x1*y1 + x2*y2 - x3*y3 on R^{2,1}.
inline double lorentz(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

// Closed halfplane pair determined by the line {x : x.u = offset}.
// plus() is H+ = {x : x.u >= offset}, minus() is the complement side.
struct HalfSpace {
    Vec2 normal;    // unit
    double offset = 0.0;

    bool in_plus(Vec2 p, double eps = 0.0) const { return dot(p, normal) >= offset - eps; }
    bool in_minus(Vec2 p, double eps = 0.0) const { return dot(p, normal) <= offset + eps; }
};

// Orientation of the triple (a,b,c): >0 for counterclockwise. Uses a static
// floating point filter and falls back to long double near the decision
// boundary; inputs are continuous random points, exact arithmetic is not
// warranted (documented epsilon 1e-12 relative).
double orient2d(Vec2 a, Vec2 b, Vec2 c);

// --- convex polygon helpers (vertices in counterclockwise order) ---

double polygon_area(std::span<const Vec2> poly);
Vec2 polygon_centroid(std::span<const Vec2> poly);

// Keeps the side {x : x.u <= offset} (i.e. H-). Empty result allowed.
std::vector<Vec2> clip_polygon(std::span<const Vec2> poly, Vec2 u, double offset);

// Point-in-convex-polygon, O(log n) wedge search. eps is an absolute slack in
// the cross-product tests; eps > 0 accepts points slightly outside.
bool convex_contains(std::span<const Vec2> poly, Vec2 p, double eps = 1e-12);

// Largest t >= 0 with origin + t*u inside the polygon (which must contain the
// origin strictly). Used for radial functions and random central sections.
double convex_ray_exit(std::span<const Vec2> poly, Vec2 from, Vec2 u);

}  // namespace polylab
