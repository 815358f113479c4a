#include "polylab/noneuclid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polylab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SpherePoint::SpherePoint(Vec3 p) {
    const double n = norm(p);
    if (n == 0.0) throw std::invalid_argument("SpherePoint: zero vector");
    v = p * (1.0 / n);
    if (v.z <= 0.0) throw std::invalid_argument("SpherePoint: must lie on the open upper half-sphere");
}

HyperboloidPoint::HyperboloidPoint(Vec3 p) {
    const double q = -lorentz(p, p);
    if (q <= 0.0 || p.z <= 0.0) throw std::invalid_argument("HyperboloidPoint: not on the upper hyperboloid");
    v = p * (1.0 / std::sqrt(q));
}

Vec2 gnomonic_sphere(const SpherePoint& x) {
    return {x.v.x / x.v.z, x.v.y / x.v.z};
}

SpherePoint gnomonic_sphere_inv(Vec2 y) {
    return SpherePoint({y.x, y.y, 1.0});
}

Vec2 gnomonic_hyper(const HyperboloidPoint& x) {
    // x ∘ e3 = -x.z, so h(x) = -x/x.z + e3.
    return {-x.v.x / x.v.z, -x.v.y / x.v.z};
}

HyperboloidPoint gnomonic_hyper_inv(Vec2 y) {
    const double r2 = norm2(y);
    if (r2 >= 1.0) throw std::invalid_argument("gnomonic_hyper_inv: point must be inside the unit disc");
    const double lam = 1.0 / std::sqrt(1.0 - r2);
    return HyperboloidPoint({-y.x * lam, -y.y * lam, lam});
}

double spherical_polygon_area(std::span<const SpherePoint> verts) {
    const size_t k = verts.size();
    if (k < 3) throw std::invalid_argument("spherical_polygon_area: need at least 3 vertices");
    for (const auto& p : verts)
        if (p.v.z <= 0.0) throw std::invalid_argument("spherical_polygon_area: vertex outside the open half-sphere");
    double angle_sum = 0.0;
    for (size_t i = 0; i < k; ++i) {
        const Vec3 b = verts[i].v;
        const Vec3 a = verts[(i + k - 1) % k].v;
        const Vec3 c = verts[(i + 1) % k].v;
        const Vec3 ta = a - b * dot(a, b);
        const Vec3 tc = c - b * dot(c, b);
        angle_sum += std::atan2(norm(cross(ta, tc)), dot(ta, tc));
    }
    return angle_sum - (static_cast<double>(k) - 2.0) * kPi;
}

double hyperbolic_polygon_area(std::span<const HyperboloidPoint> verts) {
    const size_t k = verts.size();
    if (k < 3) throw std::invalid_argument("hyperbolic_polygon_area: need at least 3 vertices");
    double angle_sum = 0.0;
    for (size_t i = 0; i < k; ++i) {
        const Vec3 b = verts[i].v;
        const Vec3 a = verts[(i + k - 1) % k].v;
        const Vec3 c = verts[(i + 1) % k].v;
        // Tangent-space projections; the Lorentz product is positive definite
        // on Tan(H^2, b).
        const Vec3 ta = a + b * lorentz(a, b);
        const Vec3 tc = c + b * lorentz(c, b);
        const double na = std::sqrt(lorentz(ta, ta));
        const double nc = std::sqrt(lorentz(tc, tc));
        double cosang = lorentz(ta, tc) / (na * nc);
        cosang = std::min(1.0, std::max(-1.0, cosang));
        angle_sum += std::acos(cosang);
    }
    return (static_cast<double>(k) - 2.0) * kPi - angle_sum;
}

Mat2 Mat2::inverse() const {
    const double dt = det();
    if (dt == 0.0) throw std::invalid_argument("Mat2::inverse: singular");
    return {d / dt, -b / dt, -c / dt, a / dt};
}

HilbertDomain::HilbertDomain(SmoothBody C, int grid_m) : C_(std::move(C)), grid_m_(grid_m) {
    if (C_.dimension() != 2) throw std::invalid_argument("HilbertDomain: 2D bodies only");
    if (grid_m_ < 16 || grid_m_ % 2 != 0) throw std::invalid_argument("HilbertDomain: grid M must be even and >= 16");
    hull_cache_ = C_.proxy();
}

std::shared_ptr<const HilbertDomain> HilbertDomain::parse(const std::string& body_id, int grid_m) {
    return std::make_shared<HilbertDomain>(SmoothBody::parse(body_id), grid_m);
}

HilbertDomain HilbertDomain::transformed(const Mat2& A, Vec2 shift) const {
    HilbertDomain out(*this);
    // Compose on the left: new placement x -> A (old placement x) + shift.
    if (!affine_) {
        out.fwd_ = A;
        out.shift_ = shift;
    } else {
        out.fwd_ = {A.a * fwd_.a + A.b * fwd_.c, A.a * fwd_.b + A.b * fwd_.d,
                    A.c * fwd_.a + A.d * fwd_.c, A.c * fwd_.b + A.d * fwd_.d};
        out.shift_ = A.apply(shift_) + shift;
    }
    out.affine_ = true;
    out.inv_ = out.fwd_.inverse();
    out.hull_cache_.clear();
    out.hull_cache_.reserve(C_.proxy().size());
    for (Vec2 p : C_.proxy()) out.hull_cache_.push_back(out.fwd_.apply(p) + out.shift_);
    if (out.fwd_.det() < 0.0) std::reverse(out.hull_cache_.begin(), out.hull_cache_.end());
    return out;
}

bool HilbertDomain::contains(Vec2 x, double clearance) const {
    return convex_contains(hull_cache_, x, -clearance);
}

double HilbertDomain::ray_exit(Vec2 x, Vec2 u) const {
    if (affine_) {
        const Vec2 xp = inv_.apply(x - shift_);
        const Vec2 w = inv_.apply(u);
        const double wn = norm(w);
        return ray_exit_canonical(xp, w * (1.0 / wn)) / wn;
    }
    return ray_exit_canonical(x, u);
}

double HilbertDomain::ray_exit_canonical(Vec2 x, Vec2 u) const {
    switch (C_.kind()) {
        case BodyKind::Disc: {
            const double R = C_.support(0.0);
            const double xu = dot(x, u);
            const double disc = xu * xu + R * R - norm2(x);
            if (disc < 0.0) throw std::invalid_argument("ray_exit: point outside the domain");
            return -xu + std::sqrt(disc);
        }
        case BodyKind::Ellipse: {
            const double a = C_.support(0.0), b = C_.support(1.5707963267948966);
            const Vec2 xs{x.x / a, x.y / b};
            const Vec2 us{u.x / a, u.y / b};
            const double A = norm2(us), B = dot(xs, us), Cq = norm2(xs) - 1.0;
            const double disc = B * B - A * Cq;
            if (disc < 0.0) throw std::invalid_argument("ray_exit: point outside the domain");
            return (-B + std::sqrt(disc)) / A;
        }
        default: {
            // Angular bisection on the boundary curve: the cross product of
            // (boundary - x) with u changes sign exactly twice; pick the
            // crossing with positive ray parameter.
            const auto side = [&](double th) { return cross(C_.boundary_point(th) - x, u); };
            const auto ahead = [&](double th) { return dot(C_.boundary_point(th) - x, u) > 0.0; };
            constexpr int kScan = 128;
            double prev_th = 0.0, prev_s = side(0.0);
            for (int i = 1; i <= kScan; ++i) {
                const double th = 2.0 * kPi * i / kScan;
                const double s = side(th);
                if ((prev_s <= 0.0) != (s <= 0.0)) {
                    double lo = prev_th, hi = th, slo = prev_s;
                    for (int it = 0; it < 100; ++it) {
                        const double mid = 0.5 * (lo + hi);
                        const double sm = side(mid);
                        if ((slo <= 0.0) == (sm <= 0.0)) {
                            lo = mid;
                            slo = sm;
                        } else {
                            hi = mid;
                        }
                        if (hi - lo < 1e-13) break;
                    }
                    const double th_root = 0.5 * (lo + hi);
                    if (ahead(th_root)) return dot(C_.boundary_point(th_root) - x, u);
                }
                prev_th = th;
                prev_s = s;
            }
            throw std::runtime_error("ray_exit: no boundary crossing found");
        }
    }
}

double HilbertDomain::hilbert_distance(Vec2 x, Vec2 y) const {
    if (!contains(x, 1e-12) || !contains(y, 1e-12))
        throw std::invalid_argument("hilbert_distance: points must lie in the interior of C");
    const Vec2 d = y - x;
    const double m = norm(d);
    if (m == 0.0) return 0.0;
    const Vec2 u = d * (1.0 / m);
    const double tq = ray_exit(x, u);    // beyond y
    const double tp = ray_exit(x, -u);   // behind x
    return 0.5 * std::log(((tp + m) / tp) * (tq / (tq - m)));
}

double HilbertDomain::harmonic_ball_radial(Vec2 x, Vec2 u) const {
    const double tp = ray_exit(x, u);
    const double tm = ray_exit(x, -u);
    return 2.0 * tp * tm / (tp + tm);
}

void HilbertDomain::harmonic_profile(Vec2 x, std::vector<double>& rho) const {
    const int m = grid_m_;
    rho.resize(m);
    std::vector<double> exits(m);
    for (int i = 0; i < m; ++i) exits[i] = ray_exit(x, dir(2.0 * kPi * i / m));
    for (int i = 0; i < m; ++i) {
        const double tp = exits[i];
        const double tm = exits[(i + m / 2) % m];
        rho[i] = 2.0 * tp * tm / (tp + tm);
    }
}

double HilbertDomain::busemann_raw(Vec2 x) const {
    double bu, ht;
    densities_raw(x, bu, ht);
    return bu;
}

double HilbertDomain::holmes_thompson_raw(Vec2 x) const {
    double bu, ht;
    densities_raw(x, bu, ht);
    return ht;
}

void HilbertDomain::densities_raw(Vec2 x, double& busemann, double& holmes_thompson) const {
    const int m = grid_m_;
    std::vector<double> rho;
    harmonic_profile(x, rho);
    const double dth = 2.0 * kPi / m;
    double vol = 0.0;
    for (int i = 0; i < m; ++i) vol += rho[i] * rho[i];
    vol *= 0.5 * dth;
    busemann = kPi / vol;
    // Support function of B_{C,x} on the same direction grid by a rotating
    // argmax sweep over the (angularly ordered) boundary points rho_i u_i.
    std::vector<Vec2> pts(m);
    for (int i = 0; i < m; ++i) pts[i] = dir(2.0 * kPi * i / m) * rho[i];
    int arg = 0;
    {
        const Vec2 v0 = dir(0.0);
        double best = dot(pts[0], v0);
        for (int i = 1; i < m; ++i) {
            const double s = dot(pts[i], v0);
            if (s > best) {
                best = s;
                arg = i;
            }
        }
    }
    double polar = 0.0;
    for (int j = 0; j < m; ++j) {
        const Vec2 v = dir(2.0 * kPi * j / m);
        double cur = dot(pts[arg], v);
        for (int step = 0; step < m; ++step) {
            const int nxt = (arg + 1) % m;
            const double s = dot(pts[nxt], v);
            if (s >= cur) {
                arg = nxt;
                cur = s;
            } else {
                break;
            }
        }
        polar += 1.0 / (cur * cur);
    }
    polar *= 0.5 * dth;
    holmes_thompson = polar / kPi;
}

}  // namespace polylab
