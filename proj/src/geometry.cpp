#include "polylab/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace polylab {

double orient2d(Vec2 a, Vec2 b, Vec2 c) {
    const double detl = (b.x - a.x) * (c.y - a.y);
    const double detr = (b.y - a.y) * (c.x - a.x);
    const double det = detl - detr;
    const double mag = std::abs(detl) + std::abs(detr);
    // 2^-50 ~ 8.9e-16: comfortably above the rounding error of the two products.
    if (std::abs(det) > mag * 8.9e-16) return det;
    const long double dl = (static_cast<long double>(b.x) - a.x) * (static_cast<long double>(c.y) - a.y)
                         - (static_cast<long double>(b.y) - a.y) * (static_cast<long double>(c.x) - a.x);
    return static_cast<double>(dl);
}

double polygon_area(std::span<const Vec2> poly) {
    const size_t n = poly.size();
    if (n < 3) return 0.0;
    double s = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        s += cross(a, b);
    }
    return 0.5 * s;
}

Vec2 polygon_centroid(std::span<const Vec2> poly) {
    const size_t n = poly.size();
    double a6 = 0.0;
    Vec2 c{0.0, 0.0};
    for (size_t i = 0; i < n; ++i) {
        const Vec2 p = poly[i];
        const Vec2 q = poly[(i + 1) % n];
        const double w = cross(p, q);
        a6 += w;
        c += (p + q) * w;
    }
    if (a6 == 0.0) return poly.empty() ? Vec2{} : poly[0];
    return c * (1.0 / (3.0 * a6));
}

std::vector<Vec2> clip_polygon(std::span<const Vec2> poly, Vec2 u, double offset) {
    std::vector<Vec2> out;
    const size_t n = poly.size();
    if (n == 0) return out;
    out.reserve(n + 2);
    double dprev = dot(poly[n - 1], u) - offset;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 cur = poly[i];
        const Vec2 prev = poly[(i + n - 1) % n];
        const double dcur = dot(cur, u) - offset;
        if (dprev <= 0.0) {
            if (dcur <= 0.0) {
                out.push_back(cur);
            } else {
                const double t = dprev / (dprev - dcur);
                out.push_back(prev + (cur - prev) * t);
            }
        } else if (dcur <= 0.0) {
            const double t = dprev / (dprev - dcur);
            out.push_back(prev + (cur - prev) * t);
            out.push_back(cur);
        }
        dprev = dcur;
    }
    return out;
}

bool convex_contains(std::span<const Vec2> poly, Vec2 p, double eps) {
    const size_t n = poly.size();
    if (n == 0) return false;
    if (n == 1) return norm(p - poly[0]) <= eps;
    if (n == 2) {
        // Degenerate segment: treat as contained if within eps of it.
        const Vec2 a = poly[0], b = poly[1];
        const double t = std::clamp(dot(p - a, b - a) / std::max(norm2(b - a), 1e-300), 0.0, 1.0);
        return norm(p - (a + (b - a) * t)) <= eps;
    }
    const Vec2 v0 = poly[0];
    if (cross(poly[1] - v0, p - v0) < -eps) return false;
    if (cross(poly[n - 1] - v0, p - v0) > eps) return false;
    // Binary search for the wedge containing p.
    size_t lo = 1, hi = n - 1;
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        if (cross(poly[mid] - v0, p - v0) >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return cross(poly[hi] - poly[lo], p - poly[lo]) >= -eps;
}

double convex_ray_exit(std::span<const Vec2> poly, Vec2 from, Vec2 u) {
    const size_t n = poly.size();
    double best = -1.0;
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        const Vec2 e = b - a;
        const double denom = cross(u, e);
        if (denom == 0.0) continue;
        const double t = cross(a - from, e) / denom;
        const double s = cross(a - from, u) / denom;
        if (t > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::max(best, t);
    }
    if (best < 0.0) throw std::runtime_error("convex_ray_exit: ray does not leave the polygon (origin outside?)");
    return best;
}

}  // namespace polylab
