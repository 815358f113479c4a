#include "polylab/body.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "polylab/quadrature.hpp"

namespace polylab {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> split_params(const std::string& id, std::string& head) {
    std::vector<double> out;
    std::stringstream ss(id);
    std::string tok;
    if (!std::getline(ss, head, ':')) throw std::invalid_argument("empty body id");
    while (std::getline(ss, tok, ':')) out.push_back(std::stod(tok));
    return out;
}
}  // namespace

SmoothBody SmoothBody::disc(double radius) {
    if (radius <= 0.0) throw std::invalid_argument("disc: radius must be positive");
    SmoothBody b;
    b.kind_ = BodyKind::Disc;
    b.params_[0] = radius;
    std::ostringstream os;
    os << "disc:" << radius;
    b.id_ = os.str();
    b.finish_2d();
    return b;
}

SmoothBody SmoothBody::ellipse(double a, double bb) {
    if (a <= 0.0 || bb <= 0.0) throw std::invalid_argument("ellipse: axes must be positive");
    SmoothBody b;
    b.kind_ = BodyKind::Ellipse;
    b.params_[0] = a;
    b.params_[1] = bb;
    std::ostringstream os;
    os << "ellipse:" << a << ":" << bb;
    b.id_ = os.str();
    b.finish_2d();
    return b;
}

SmoothBody SmoothBody::fourier(double h0, double eps, int k) {
    SmoothBody b;
    b.kind_ = BodyKind::Fourier;
    b.params_[0] = h0;
    b.params_[1] = eps;
    b.fourier_k_ = k;
    if (h0 <= 0.0 || k < 0) throw std::invalid_argument("fourier: bad parameters");
    if (std::abs(eps) * (static_cast<double>(k) * k - 1.0) >= h0)
        throw std::invalid_argument("fourier: eps*(k^2-1) must stay below h0 for positive curvature");
    std::ostringstream os;
    os << "fourier:" << h0 << ":" << eps << ":" << k;
    b.id_ = os.str();
    b.finish_2d();
    return b;
}

SmoothBody SmoothBody::ball3(double radius) {
    if (radius <= 0.0) throw std::invalid_argument("ball3: radius must be positive");
    SmoothBody b;
    b.kind_ = BodyKind::Ball3;
    b.dim_ = 3;
    b.params_[0] = b.params_[1] = b.params_[2] = radius;
    std::ostringstream os;
    os << "ball3:" << radius;
    b.id_ = os.str();
    return b;
}

SmoothBody SmoothBody::ellipsoid3(double a, double bb, double c) {
    if (a <= 0.0 || bb <= 0.0 || c <= 0.0) throw std::invalid_argument("ellipsoid3: axes must be positive");
    SmoothBody b;
    b.kind_ = BodyKind::Ellipsoid3;
    b.dim_ = 3;
    b.params_[0] = a;
    b.params_[1] = bb;
    b.params_[2] = c;
    std::ostringstream os;
    os << "ellipsoid3:" << a << ":" << bb << ":" << c;
    b.id_ = os.str();
    return b;
}

SmoothBody SmoothBody::parse(const std::string& id) {
    std::string head;
    const std::vector<double> p = split_params(id, head);
    if (head == "disc" && p.size() == 1) return disc(p[0]);
    if (head == "ellipse" && p.size() == 2) return ellipse(p[0], p[1]);
    if (head == "fourier" && p.size() == 3) return fourier(p[0], p[1], static_cast<int>(p[2]));
    if (head == "ball3" && p.size() == 1) return ball3(p[0]);
    if (head == "ellipsoid3" && p.size() == 3) return ellipsoid3(p[0], p[1], p[2]);
    throw std::invalid_argument("unknown body id: " + id);
}

void SmoothBody::finish_2d() {
    // Positivity of h + h'' on a fine grid stands in for a symbolic proof.
    constexpr int kGrid = 8192;
    for (int i = 0; i < kGrid; ++i) {
        const double th = 2.0 * kPi * i / kGrid;
        if (curvature_radius(th) <= 0.0)
            throw std::invalid_argument("body is not in K^2_+: curvature radius <= 0 at the grid");
    }
    proxy_ = make_proxy(4096);
    proxy_area_ = polygon_area(proxy_);
}

double SmoothBody::support(double theta) const {
    switch (kind_) {
        case BodyKind::Disc:
            return params_[0];
        case BodyKind::Ellipse: {
            const double c = std::cos(theta), s = std::sin(theta);
            return std::sqrt(params_[0] * params_[0] * c * c + params_[1] * params_[1] * s * s);
        }
        case BodyKind::Fourier:
            return params_[0] + params_[1] * std::cos(fourier_k_ * theta);
        default:
            throw std::logic_error("support: 2D bodies only");
    }
}

double SmoothBody::support_d1(double theta) const {
    switch (kind_) {
        case BodyKind::Disc:
            return 0.0;
        case BodyKind::Ellipse: {
            const double a2 = params_[0] * params_[0], b2 = params_[1] * params_[1];
            return 0.5 * (b2 - a2) * std::sin(2.0 * theta) / support(theta);
        }
        case BodyKind::Fourier:
            return -params_[1] * fourier_k_ * std::sin(fourier_k_ * theta);
        default:
            throw std::logic_error("support_d1: 2D bodies only");
    }
}

double SmoothBody::support_d2(double theta) const {
    switch (kind_) {
        case BodyKind::Disc:
            return 0.0;
        case BodyKind::Ellipse: {
            const double a2 = params_[0] * params_[0], b2 = params_[1] * params_[1];
            const double h = support(theta);
            const double h1 = support_d1(theta);
            // From h^2 = a^2 cos^2 + b^2 sin^2: h'' = (Q'' - 2 h'^2) / (2h).
            const double qpp = 2.0 * (b2 - a2) * std::cos(2.0 * theta);
            return (qpp - 2.0 * h1 * h1) / (2.0 * h);
        }
        case BodyKind::Fourier:
            return -params_[1] * fourier_k_ * fourier_k_ * std::cos(fourier_k_ * theta);
        default:
            throw std::logic_error("support_d2: 2D bodies only");
    }
}

Vec2 SmoothBody::boundary_point(double theta) const {
    if (dim_ != 2) throw std::invalid_argument("boundary_point: 2D bodies only");
    const Vec2 u = dir(theta);
    return u * support(theta) + perp(u) * support_d1(theta);
}

double SmoothBody::boundary_integral(const std::function<double(Vec2, double)>& g, int panels, int order) const {
    if (dim_ != 2) throw std::invalid_argument("boundary_integral: 2D bodies only");
    const auto f = [&](double th) {
        const double rho = curvature_radius(th);
        return g(boundary_point(th), 1.0 / rho) * rho;
    };
    return integrate(f, 0.0, 2.0 * kPi, panels, order);
}

double SmoothBody::area() const {
    if (dim_ == 3) return volume3();
    // 1/2 \int (h^2 - h'^2), exact for support-parametrized boundaries.
    const auto f = [&](double th) {
        const double h = support(th), h1 = support_d1(th);
        return h * h - h1 * h1;
    };
    return 0.5 * integrate(f, 0.0, 2.0 * kPi, 512, 8);
}

double SmoothBody::perimeter() const {
    return boundary_integral([](Vec2, double) { return 1.0; });
}

double SmoothBody::volume3() const {
    return 4.0 / 3.0 * kPi * params_[0] * params_[1] * params_[2];
}

std::vector<Vec2> SmoothBody::make_proxy(int vertices) const {
    if (dim_ != 2) throw std::invalid_argument("make_proxy: 2D bodies only");
    std::vector<Vec2> poly(vertices);
    for (int i = 0; i < vertices; ++i) poly[i] = boundary_point(2.0 * kPi * i / vertices);
    return poly;
}

bool SmoothBody::contains(Vec2 p, double eps) const {
    if (dim_ != 2) throw std::invalid_argument("contains: use contains3 for 3D bodies");
    return convex_contains(proxy_, p, eps);
}

bool SmoothBody::contains3(Vec3 p) const {
    const double a = params_[0], b = params_[1], c = params_[2];
    const double q = (p.x / a) * (p.x / a) + (p.y / b) * (p.y / b) + (p.z / c) * (p.z / c);
    return q <= 1.0;
}

void SmoothBody::bounding_box(Vec2& lo, Vec2& hi) const {
    hi = {support(0.0), support(0.5 * kPi)};
    lo = {-support(kPi), -support(1.5 * kPi)};
}

void SmoothBody::bounding_box3(Vec3& lo, Vec3& hi) const {
    hi = {params_[0], params_[1], params_[2]};
    lo = {-params_[0], -params_[1], -params_[2]};
}

double SmoothBody::cap_area_exact(double theta_z, double t) const {
    if (dim_ != 2) throw std::invalid_argument("cap_area_exact: 2D bodies only");
    if (t < 0.0) throw std::invalid_argument("cap_area_exact: t must be >= 0");
    if (t == 0.0) return 0.0;
    const Vec2 n = dir(theta_z);
    const Vec2 z = boundary_point(theta_z);
    const double cut = dot(z, n) - t;  // boundary of {x.n >= cut}
    // Signed depth of the boundary below the cut line; positive inside the cap.
    const auto depth = [&](double th) { return dot(boundary_point(th), n) - cut; };
    // The support function is maximal in direction n at theta_z; pure bisection
    // on each side locates the two crossings (depth is monotone along each arc
    // between the touching point and the antipodal minimum for convex bodies).
    const auto find_crossing = [&](double lo, double hi) {
        double flo = depth(lo);
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = depth(mid);
            if ((flo > 0.0) == (fm > 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
            if (hi - lo < 1e-14) break;
        }
        return 0.5 * (lo + hi);
    };
    if (depth(theta_z + kPi) >= 0.0) return area();  // cut swallows the body
    const double th1 = find_crossing(theta_z - kPi, theta_z);  // entering the cap
    const double th2 = find_crossing(theta_z, theta_z + kPi);  // leaving the cap
    // Green's theorem along arc th1 -> th2 plus the closing chord.
    const auto cr = [&](double th) {
        const Vec2 x = boundary_point(th);
        // x'(theta) = (h + h'') * perp(u)
        const Vec2 xp = perp(dir(th)) * curvature_radius(th);
        return cross(x, xp);
    };
    const double arc = integrate(cr, th1, th2, 64, 16);
    const double chord = cross(boundary_point(th2), boundary_point(th1));
    return 0.5 * (arc + chord);
}

}  // namespace polylab
