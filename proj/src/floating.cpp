#include "polylab/floating.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polylab/hull.hpp"
#include "polylab/special.hpp"

namespace polylab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

EdgeConeTable build_cone_table(const std::vector<Vec2>& proxy, const WeightFunction& w) {
    EdgeConeTable t;
    const size_t n = proxy.size();
    t.cone.resize(n);
    t.prefix.resize(n + 1, 0.0);
    const GaussRule& sr = gauss_legendre(w.cone_s_order());
    const GaussRule& tr = gauss_legendre(4);  // proxy edges are short
    const auto g = [&](Vec2 x) { return w.raw_density(x); };
    for (size_t i = 0; i < n; ++i) {
        t.cone[i] = cone_integral(proxy[i], proxy[(i + 1) % n], g, sr, tr);
        t.prefix[i + 1] = t.prefix[i] + t.cone[i];
    }
    t.total = t.prefix[n];
    return t;
}
}  // namespace

CapMeasureProfile::CapMeasureProfile(const std::vector<Vec2>& proxy, const EdgeConeTable& cones,
                                     const WeightFunction& w, Vec2 u)
    : proxy_(proxy), cones_(cones), w_(w), u_(u) {
    const size_t n = proxy.size();
    d_.resize(n);
    for (size_t i = 0; i < n; ++i) d_[i] = dot(proxy[i], u);
    m_ = static_cast<int>(std::max_element(d_.begin(), d_.end()) - d_.begin());
    mn_ = static_cast<int>(std::min_element(d_.begin(), d_.end()) - d_.begin());
    dmax_ = d_[m_];
    dmin_ = d_[mn_];
    const int nn = static_cast<int>(n);
    len_right_ = (mn_ - m_ + nn) % nn;
    len_left_ = (m_ - mn_ + nn) % nn;
}

double CapMeasureProfile::measure(double t) const {
    if (t >= dmax_) return 0.0;
    if (t <= dmin_) return 1.0;
    const int n = static_cast<int>(d_.size());
    // Largest walk offset with projection still >= t; both walks are
    // nonincreasing between the argmax and the argmin of a convex ring.
    const auto last_at_least = [&](int step_sign, int len) {
        int lo = 0, hi = len;  // d[m + sign*lo] >= t always (lo=0), d at len is dmin < t
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            const int idx = ((m_ + step_sign * mid) % n + n) % n;
            if (d_[idx] >= t)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    };
    const int jb = last_at_least(+1, len_right_);
    const int ja = last_at_least(-1, len_left_);
    const int b = (m_ + jb) % n;
    const int a = ((m_ - ja) % n + n) % n;
    const auto lerp_on_edge = [&](int i, int j) {
        const double di = d_[i], dj = d_[j];
        const double s = (t - di) / (dj - di);
        return proxy_[i] + (proxy_[j] - proxy_[i]) * s;
    };
    const Vec2 pa = lerp_on_edge(((a - 1) % n + n) % n, a);  // entry on edge (a-1, a)
    const Vec2 pb = lerp_on_edge(b, (b + 1) % n);            // exit on edge (b, b+1)
    // Full edges strictly inside the arc a..b.
    double sum;
    if (a <= b)
        sum = cones_.prefix[b] - cones_.prefix[a];
    else
        sum = cones_.total - (cones_.prefix[a] - cones_.prefix[b]);
    const GaussRule& sr = gauss_legendre(w_.cone_s_order());
    const GaussRule& tr8 = gauss_legendre(8);
    const GaussRule& tr16 = gauss_legendre(16);
    const auto g = [&](Vec2 x) { return w_.raw_density(x); };
    sum += cone_integral(pa, proxy_[a], g, sr, tr8);
    sum += cone_integral(proxy_[b], pb, g, sr, tr8);
    sum += cone_integral(pb, pa, g, sr, tr16);  // chord spans the body
    return std::clamp(sum / cones_.total, 0.0, 1.0);
}

double CapMeasureProfile::cut_height(double delta) const {
    if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("cut_height: delta must be in (0,1)");
    double lo = dmin_, hi = dmax_;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double m = measure(mid);
        if (std::abs(m - delta) <= 1e-9) return mid;
        if (m > delta)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-14 * (std::abs(hi) + std::abs(lo) + 1.0)) break;
    }
    return 0.5 * (lo + hi);
}

FloatingBodySolver::FloatingBodySolver(std::shared_ptr<const SmoothBody> K, WeightFunction w, int directions)
    : K_(std::move(K)), w_(std::move(w)) {
    if (K_->dimension() != 2) throw std::invalid_argument("FloatingBodySolver: 2D bodies only");
    cones_ = build_cone_table(K_->proxy(), w_);
    dirs_.resize(directions);
    for (int i = 0; i < directions; ++i) dirs_[i] = dir(kTwoPi * i / directions);
    profiles_.resize(directions);
}

const CapMeasureProfile& FloatingBodySolver::profile(int i) const {
    if (!profiles_[i]) profiles_[i] = std::make_unique<CapMeasureProfile>(K_->proxy(), cones_, w_, dirs_[i]);
    return *profiles_[i];
}

double FloatingBodySolver::cut_height(Vec2 u, double delta) const {
    const CapMeasureProfile p(K_->proxy(), cones_, w_, u);
    return p.cut_height(delta);
}

FloatingBodyPolygon FloatingBodySolver::floating_body(double delta) const {
    FloatingBodyPolygon out;
    out.delta = delta;
    out.directions = directions();
    if (delta >= 1.0) return out;  // past any cap level: empty
    std::vector<Vec2> poly = K_->proxy();
    for (int i = 0; i < directions() && poly.size() >= 3; ++i) {
        const double t = profile(i).cut_height(delta);
        poly = clip_polygon(poly, dirs_[i], t);
    }
    if (poly.size() >= 3) out.polygon = std::move(poly);
    return out;
}

double FloatingBodySolver::measure_along(Vec2 u, double t) const {
    const CapMeasureProfile p(K_->proxy(), cones_, w_, u);
    return p.measure(t);
}

double FloatingBodySolver::min_cap_measure(Vec2 x) const {
    if (!K_->contains(x, 1e-12)) throw std::invalid_argument("min_cap_measure: x must lie in K");
    const int nd = directions();
    double best = 2.0;
    int best_i = 0;
    for (int i = 0; i < nd; ++i) {
        const double m = profile(i).measure(dot(x, dirs_[i]));
        if (m < best) {
            best = m;
            best_i = i;
        }
    }
    // Golden-section polish on the angle between the grid neighbors.
    const double phi0 = kTwoPi * (best_i - 1) / nd;
    const double phi1 = kTwoPi * (best_i + 1) / nd;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = phi0, b = phi1;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    const auto f = [&](double phi) { return measure_along(dir(phi), dot(x, dir(phi))); };
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 40; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return std::min(best, std::min(fc, fd));
}

double FloatingBodySolver::wet_part_volume(double delta) const {
    const FloatingBodyPolygon fb = floating_body(delta);
    return K_->proxy_area() - (fb.empty() ? 0.0 : fb.area());
}

double FloatingBodySolver::alpha_estimate() const {
    return min_cap_measure(polygon_centroid(K_->proxy()));
}

double FloatingBodySolver::refinement_delta(double delta) const {
    const FloatingBodyPolygon coarse = floating_body(delta);
    FloatingBodySolver fine(K_, w_, 2 * directions());
    const FloatingBodyPolygon refined = fine.floating_body(delta);
    if (coarse.empty() || refined.empty()) return coarse.empty() == refined.empty() ? 0.0 : 1.0;
    return std::abs(coarse.area() - refined.area()) / refined.area();
}

VisibilityRegion visibility_region(const SmoothBody& K, double theta_z, const FloatingBodyPolygon& kdelta) {
    if (kdelta.empty()) throw std::invalid_argument("visibility_region: floating body is empty");
    const Vec2 z = K.boundary_point(theta_z);
    const Vec2 nz = dir(theta_z);
    const auto& P = kdelta.polygon;
    if (convex_contains(P, z, 0.0)) throw std::invalid_argument("visibility_region: z lies inside K_delta");
    // Tangent vertices: extremes of the signed angle of (v - z) against the
    // direction toward the floating body.
    const Vec2 ref = normalized(polygon_centroid(P) - z);
    double amin = 1e300, amax = -1e300;
    Vec2 pmin, pmax;
    for (const Vec2& v : P) {
        const Vec2 w = v - z;
        const double ang = std::atan2(cross(ref, w), dot(ref, w));
        if (ang < amin) {
            amin = ang;
            pmin = v;
        }
        if (ang > amax) {
            amax = ang;
            pmax = v;
        }
    }
    const auto outward_halfplane = [&](Vec2 tangent_pt) {
        Vec2 nrm = perp(normalized(tangent_pt - z));
        if (dot(polygon_centroid(P) - z, nrm) > 0.0) nrm = -nrm;
        return nrm;  // H+ = {x : (x - z).nrm >= 0} excludes K_delta
    };
    const Vec2 n1 = outward_halfplane(pmin);
    const Vec2 n2 = outward_halfplane(pmax);
    const auto& proxy = K.proxy();
    // K ∩ H1+  (clip keeps the minus side, so flip the normal).
    const auto wedge1 = clip_polygon(proxy, -n1, -dot(z, n1));
    const auto wedge2 = clip_polygon(proxy, -n2, -dot(z, n2));
    auto both = clip_polygon(wedge1, -n2, -dot(z, n2));
    // Collar between z and the near boundary: conv({z} ∪ K_delta) \ K_delta.
    std::vector<Vec2> pts = P;
    pts.push_back(z);
    const Polytope collar_hull = convex_hull2(pts);
    const double collar = polytope_volume(collar_hull) - polygon_area(P);

    VisibilityRegion out;
    out.area = polygon_area(wedge1) + polygon_area(wedge2) - polygon_area(both) + collar;
    // Exact cap sandwich heights: depth(x) = (z - x).nz.
    double tin = 1e300;
    for (const Vec2& v : P) tin = std::min(tin, dot(z - v, nz));
    out.inner_height = std::max(0.0, tin);
    double tout = 0.0;
    for (const auto* piece : {&wedge1, &wedge2}) {
        for (const Vec2& v : *piece) tout = std::max(tout, dot(z - v, nz));
    }
    // The collar's extreme depth is at a tangent point (its arc bulges toward z).
    tout = std::max(tout, dot(z - pmin, nz));
    tout = std::max(tout, dot(z - pmax, nz));
    out.outer_height = tout;
    return out;
}

bool visible_from(const std::vector<Vec2>& kdelta, Vec2 z, Vec2 y) {
    if (convex_contains(kdelta, y, -1e-12)) return false;  // strictly inside
    // Segment [z,y] misses the convex polygon iff some edge line separates.
    const size_t n = kdelta.size();
    // Quick accept: both endpoints on the outer side of one edge.
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = kdelta[i], b = kdelta[(i + 1) % n];
        if (orient2d(a, b, z) < 0.0 && orient2d(a, b, y) < 0.0) return true;
    }
    // Otherwise the segment meets the polygon unless it misses every edge and
    // stays outside; test edge-segment intersections.
    for (size_t i = 0; i < n; ++i) {
        const Vec2 a = kdelta[i], b = kdelta[(i + 1) % n];
        const double o1 = orient2d(z, y, a), o2 = orient2d(z, y, b);
        const double o3 = orient2d(a, b, z), o4 = orient2d(a, b, y);
        if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return false;
    }
    return true;
}

CapLimitCheck cap_limit_check(const SmoothBody& K, double theta_z, const std::vector<double>& t_grid) {
    CapLimitCheck out;
    out.t = t_grid;
    out.ratio.reserve(t_grid.size());
    for (double t : t_grid) out.ratio.push_back(K.cap_area_exact(theta_z, t) / std::pow(t, 1.5));
    out.limit = std::pow(2.0, 1.5) * ball_volume(1) / 3.0 * std::pow(K.curvature(theta_z), -0.5);
    return out;
}

namespace {
bool contained(const std::vector<Vec2>& inner, const std::vector<Vec2>& outer, double eps) {
    for (const Vec2& v : inner)
        if (!convex_contains(outer, v, eps)) return false;
    return true;
}
}  // namespace

double sandwich_constant(const FloatingBodySolver& weighted, const FloatingBodySolver& classical, double delta) {
    const FloatingBodyPolygon mid = weighted.floating_body(delta);
    if (mid.empty()) return 0.0;
    const double eps = 1e-9;
    // Largest c with K_delta^phi ⊆ K_{c delta}: containment gets harder as c
    // grows (the classical body shrinks).
    const auto upper_ok = [&](double c) {
        const auto outer = classical.floating_body(c * delta);
        return !outer.empty() && contained(mid.polygon, outer.polygon, eps);
    };
    // Largest c with K_{delta/c} ⊆ K_delta^phi: harder as c grows (the
    // classical body at level delta/c grows).
    const auto lower_ok = [&](double c) {
        const auto inner = classical.floating_body(delta / c);
        return inner.empty() || contained(inner.polygon, mid.polygon, eps);
    };
    const auto bisect = [&](const auto& ok) {
        if (!ok(1e-3)) return 0.0;
        double lo = 1e-3, hi = 1.0;
        for (int it = 0; it < 24; ++it) {
            const double c = 0.5 * (lo + hi);
            if (ok(c))
                lo = c;
            else
                hi = c;
        }
        return lo;
    };
    return std::min(bisect(upper_ok), bisect(lower_ok));
}

std::vector<double> vu_containment_failure_rates(const FloatingBodySolver& solver, const std::vector<double>& cs,
                                                 int n, int replications, uint64_t master_seed) {
    std::vector<FloatingBodyPolygon> bodies;
    bodies.reserve(cs.size());
    const double base = std::log(static_cast<double>(n)) / n;
    for (double c : cs) bodies.push_back(solver.floating_body(c * base));
    std::vector<long> failures(cs.size(), 0);
    std::vector<Vec2> pts(n);
    for (int rep = 0; rep < replications; ++rep) {
        Rng rng(derive_seed(master_seed, "vu-containment", n, rep));
        for (int i = 0; i < n; ++i) pts[i] = solver.weight().sample(rng);
        const Polytope hull = convex_hull2(pts);
        for (size_t k = 0; k < cs.size(); ++k) {
            if (bodies[k].empty()) continue;
            if (!contained(bodies[k].polygon, hull.verts2, 1e-12)) ++failures[k];
        }
    }
    std::vector<double> rates(cs.size());
    for (size_t k = 0; k < cs.size(); ++k) rates[k] = static_cast<double>(failures[k]) / replications;
    return rates;
}

}  // namespace polylab
