#include "polylab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polylab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;
}  // namespace

WeightFunction WeightFunction::uniform(std::shared_ptr<const SmoothBody> K) {
    WeightFunction w;
    w.kind_ = Kind::Uniform;
    w.id_ = "uniform";
    w.K_ = std::move(K);
    w.finalize();
    return w;
}

WeightFunction WeightFunction::spherical(std::shared_ptr<const SmoothBody> K) {
    WeightFunction w;
    w.kind_ = Kind::Spherical;
    w.id_ = "spherical";
    w.K_ = std::move(K);
    if (w.K_->dimension() != 2) throw std::invalid_argument("spherical weight: 2D bodies only");
    w.finalize();
    return w;
}

WeightFunction WeightFunction::hyperbolic(std::shared_ptr<const SmoothBody> K) {
    WeightFunction w;
    w.kind_ = Kind::Hyperbolic;
    w.id_ = "hyperbolic";
    w.K_ = std::move(K);
    if (w.K_->dimension() != 2) throw std::invalid_argument("hyperbolic weight: 2D bodies only");
    double rmax = 0.0;
    for (Vec2 v : w.K_->proxy()) rmax = std::max(rmax, norm(v));
    if (rmax >= 1.0 - 1e-9)
        throw std::invalid_argument("hyperbolic weight: body must lie strictly inside the unit ball");
    w.finalize();
    return w;
}

WeightFunction WeightFunction::dual_power(std::shared_ptr<const SmoothBody> K, int j) {
    WeightFunction w;
    w.kind_ = Kind::DualPower;
    w.K_ = std::move(K);
    const int d = w.K_->dimension();
    if (j < 1 || j > d) throw std::invalid_argument("dual_power: need 1 <= j <= d");
    w.dual_j_ = j;
    std::ostringstream os;
    os << "dual:" << j;
    w.id_ = os.str();
    if (d == 2 && !w.K_->contains({0.0, 0.0})) throw std::invalid_argument("dual_power: o must be interior to K");
    w.finalize();
    return w;
}

WeightFunction WeightFunction::hilbert(std::shared_ptr<const SmoothBody> K, std::shared_ptr<const HilbertDomain> C,
                                       bool holmes_thompson, HilbertGridParams grid) {
    WeightFunction w;
    w.kind_ = holmes_thompson ? Kind::HilbertHolmesThompson : Kind::HilbertBusemann;
    w.K_ = std::move(K);
    w.C_ = std::move(C);
    w.grid_ = grid;
    w.s_order_ = 16;
    w.tau_order_ = 16;
    if (w.K_->dimension() != 2) throw std::invalid_argument("hilbert weight: 2D bodies only");
    w.id_ = std::string(holmes_thompson ? "hilbert-ht:" : "hilbert-bu:") + w.C_->id();
    // Positive clearance between K and the ambient boundary, reported via the
    // exception if violated.
    for (Vec2 v : w.K_->proxy())
        if (!w.C_->contains(v, -1e-6))
            throw std::invalid_argument("hilbert weight: K must lie in the interior of C with positive clearance");
    // Precompute the raw density on the (alpha, s) grid. Both Busemann and
    // Holmes-Thompson values come from the same harmonic profiles, and the
    // interpolated field — not the pointwise-exact density — is the weight
    // actually used for sampling and measuring, so the two stay consistent.
    const int na = w.grid_.n_alpha, ns = w.grid_.n_s;
    w.grid_values_.resize(static_cast<size_t>(na) * ns);
    w.grid_radial_.resize(na);
    const auto& proxy = w.K_->proxy();
    for (int ia = 0; ia < na; ++ia) {
        const double alpha = kTwoPi * ia / na;
        const double rk = convex_ray_exit(proxy, {0.0, 0.0}, dir(alpha));
        w.grid_radial_[ia] = rk;
        for (int is = 0; is < ns; ++is) {
            const double s = static_cast<double>(is) / (ns - 1);
            const Vec2 x = dir(alpha) * (s * rk);
            double bu, ht;
            w.C_->densities_raw(x, bu, ht);
            w.grid_values_[static_cast<size_t>(ia) * ns + is] = holmes_thompson ? ht : bu;
        }
    }
    w.finalize();
    return w;
}

WeightFunction WeightFunction::parse(const std::string& id, std::shared_ptr<const SmoothBody> K) {
    if (id == "uniform") return uniform(std::move(K));
    if (id == "spherical") return spherical(std::move(K));
    if (id == "hyperbolic") return hyperbolic(std::move(K));
    if (id.rfind("dual:", 0) == 0) return dual_power(std::move(K), std::stoi(id.substr(5)));
    if (id.rfind("hilbert-bu:", 0) == 0) return hilbert(std::move(K), HilbertDomain::parse(id.substr(11)), false);
    if (id.rfind("hilbert-ht:", 0) == 0) return hilbert(std::move(K), HilbertDomain::parse(id.substr(11)), true);
    throw std::invalid_argument("unknown weight id: " + id);
}

double WeightFunction::hilbert_interp(double alpha, double r) const {
    const int na = grid_.n_alpha, ns = grid_.n_s;
    double a = alpha / kTwoPi * na;
    a -= std::floor(a / na) * na;
    int ia = static_cast<int>(a);
    if (ia >= na) ia = na - 1;
    const double fa = a - ia;
    const int ia1 = (ia + 1) % na;
    const double rk = grid_radial_[ia] * (1.0 - fa) + grid_radial_[ia1] * fa;
    double s = r / rk;
    if (s < 0.0) s = 0.0;
    if (s > 1.0) s = 1.0;
    const double ss = s * (ns - 1);
    int is = static_cast<int>(ss);
    if (is >= ns - 1) is = ns - 2;
    const double fs = ss - is;
    const auto val = [&](int i, int k) { return grid_values_[static_cast<size_t>(i) * ns + k]; };
    return (val(ia, is) * (1.0 - fs) + val(ia, is + 1) * fs) * (1.0 - fa)
         + (val(ia1, is) * (1.0 - fs) + val(ia1, is + 1) * fs) * fa;
}

double WeightFunction::raw_density(Vec2 x) const {
    switch (kind_) {
        case Kind::Uniform:
            return 1.0;
        case Kind::Spherical:
            return std::pow(1.0 + norm2(x), -1.5);
        case Kind::Hyperbolic:
            return std::pow(1.0 - norm2(x), -1.5);
        case Kind::DualPower: {
            const double r = norm(x);
            if (dual_j_ == 2) return 1.0;
            return r == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / r;
        }
        default:
            return hilbert_interp(std::atan2(x.y, x.x), norm(x));
    }
}

double WeightFunction::raw_density3(Vec3 x) const {
    switch (kind_) {
        case Kind::Uniform:
            return 1.0;
        case Kind::DualPower: {
            const double r = norm(x);
            if (dual_j_ == 3) return 1.0;
            const double p = static_cast<double>(dual_j_) - 3.0;
            return r == 0.0 ? std::numeric_limits<double>::infinity() : std::pow(r, p);
        }
        default:
            throw std::invalid_argument("raw_density3: only uniform and dual weights support 3D");
    }
}

double WeightFunction::density(Vec2 x) const {
    if (!K_->contains(x, 1e-12)) throw std::invalid_argument("density: point outside K");
    return raw_density(x) / Z_;
}

void WeightFunction::finalize() {
    if (K_->dimension() == 3) {
        if (kind_ == Kind::Uniform) {
            Z_ = K_->volume3();
        } else if (kind_ == Kind::DualPower) {
            // ∫_K ||x||^{j-3}: computed by high-resolution spherical MC would
            // be noisy; use the exact radial formula for the ellipsoid zoo via
            // 2D quadrature over directions.
            const Vec3 ax = K_->ellipsoid_axes();
            const auto radial = [&](double phi, double th) {
                const Vec3 u{std::cos(phi) * std::sin(th), std::sin(phi) * std::sin(th), std::cos(th)};
                const double q = (u.x / ax.x) * (u.x / ax.x) + (u.y / ax.y) * (u.y / ax.y) + (u.z / ax.z) * (u.z / ax.z);
                return 1.0 / std::sqrt(q);
            };
            const int jj = dual_j_;
            const auto fphi = [&](double th) {
                const auto g = [&](double phi) { return std::pow(radial(phi, th), jj); };
                return integrate(g, 0.0, kTwoPi, 32, 8) * std::sin(th) / jj;
            };
            Z_ = integrate(fphi, 0.0, kPi, 32, 8);
        } else {
            throw std::invalid_argument("3D bodies support only uniform and dual weights");
        }
        raw_ub_ = 1.0;
        c_lower_ = c_upper_ = 1.0 / Z_;
        return;
    }
    const auto& proxy = K_->proxy();
    if (kind_ == Kind::Uniform) {
        Z_ = K_->proxy_area();
    } else {
        const auto g = [&](Vec2 x) { return raw_density(x); };
        Z_ = polygon_cone_integral(proxy, g, s_order_, tau_order_);
    }
    // Density bounds over the proxy boundary and interior spokes; for the dual
    // power kind the singular origin sits in the interior core by definition,
    // so the reported upper bound is taken at radius >= half the inradius.
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (size_t i = 0; i < proxy.size(); i += 8) {
        for (double s : {1.0, 0.75, 0.5}) {
            const Vec2 x = proxy[i] * s;
            const double v = raw_density(x);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double vc = raw_density(proxy[i] * 1e-3);
        if (kind_ != Kind::DualPower) {
            lo = std::min(lo, vc);
            hi = std::max(hi, vc);
        }
    }
    c_lower_ = lo / Z_;
    c_upper_ = hi / Z_;
    // Rejection-sampling bound: kind-specific exact maxima.
    switch (kind_) {
        case Kind::Uniform:
            raw_ub_ = 1.0;
            break;
        case Kind::Spherical:
            raw_ub_ = 1.0;
            break;
        case Kind::Hyperbolic: {
            double rmax = 0.0;
            for (Vec2 v : proxy) rmax = std::max(rmax, norm(v));
            raw_ub_ = std::pow(1.0 - rmax * rmax, -1.5);
            break;
        }
        case Kind::DualPower:
            raw_ub_ = std::numeric_limits<double>::infinity();
            break;
        default:
            // Bilinear interpolation never exceeds the node maximum.
            raw_ub_ = *std::max_element(grid_values_.begin(), grid_values_.end());
            break;
    }
}

Vec2 WeightFunction::sample(Rng& rng, long max_proposals) const {
    if (!std::isfinite(raw_ub_))
        throw std::invalid_argument("sample: " + id_ + " has an unbounded density and is a measuring weight only");
    Vec2 lo, hi;
    K_->bounding_box(lo, hi);
    for (long i = 1; i <= max_proposals; ++i) {
        const Vec2 x{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (!K_->contains(x)) continue;
        if (kind_ == Kind::Uniform) return x;
        if (rng.uniform() * raw_ub_ <= raw_density(x)) return x;
    }
    std::ostringstream os;
    os << "sample: exceeded " << max_proposals << " proposals for " << id_
       << " (acceptance rate below " << 1.0 / static_cast<double>(max_proposals) << ")";
    throw std::runtime_error(os.str());
}

double WeightFunction::rejection_acceptance_rate(Rng& rng, long proposals) const {
    Vec2 lo, hi;
    K_->bounding_box(lo, hi);
    long accepted = 0;
    for (long i = 0; i < proposals; ++i) {
        const Vec2 x{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (!K_->contains(x)) continue;
        if (kind_ == Kind::Uniform || rng.uniform() * raw_ub_ <= raw_density(x)) ++accepted;
    }
    return static_cast<double>(accepted) / static_cast<double>(proposals);
}

Vec3 WeightFunction::sample3(Rng& rng, long max_proposals) const {
    if (kind_ != Kind::Uniform) throw std::invalid_argument("sample3: only the uniform weight samples in 3D");
    Vec3 lo, hi;
    K_->bounding_box3(lo, hi);
    for (long i = 1; i <= max_proposals; ++i) {
        const Vec3 x{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y), rng.uniform(lo.z, hi.z)};
        if (K_->contains3(x)) return x;
    }
    throw std::runtime_error("sample3: exceeded proposal budget");
}

double WeightFunction::raw_integral(std::span<const Vec2> poly) const {
    if (kind_ == Kind::Uniform) return polygon_area(poly);
    const auto g = [&](Vec2 x) { return raw_density(x); };
    return polygon_cone_integral(poly, g, s_order_, tau_order_);
}

double WeightFunction::weighted_volume(std::span<const Vec2> poly) const {
    if (poly.size() < 3) return 0.0;
    return raw_integral(poly) / Z_;
}

double WeightFunction::weighted_volume(const Polytope& P) const {
    if (P.degenerate) return 0.0;
    if (P.dim == 2) return weighted_volume(P.verts2);
    if (kind_ == Kind::Uniform) return polytope_volume(P) / Z_;
    // Callers with a per-replication error budget should use
    // mc_weighted_volume3 directly; this convenience path runs a fixed budget.
    Rng rng(derive_seed(0x9e11, "weighted-volume-3d", P.verts3.size(), 0));
    const McResult r = mc_weighted_volume3(P, rng, 2000000, 0.0);
    return r.value / Z_;
}

McResult WeightFunction::mc_weighted_volume(const Polytope& P, Rng& rng, long total_samples) const {
    // Uniform sampling over a signed fan about the centroid; valid for convex
    // polygons, used as the brute-force oracle for the cone-rule path.
    McResult out;
    if (P.dim != 2 || P.degenerate) return out;
    const Vec2 c = polygon_centroid(P.verts2);
    const size_t n = P.verts2.size();
    std::vector<double> areas(n);
    double total_area = 0.0;
    for (size_t i = 0; i < n; ++i) {
        areas[i] = 0.5 * cross(P.verts2[i] - c, P.verts2[(i + 1) % n] - c);
        total_area += areas[i];
    }
    double sum = 0.0, sum2 = 0.0;
    long count = 0;
    for (size_t i = 0; i < n; ++i) {
        const long ni = std::max<long>(8, static_cast<long>(total_samples * areas[i] / total_area));
        const Vec2 a = P.verts2[i] - c, b = P.verts2[(i + 1) % n] - c;
        double si = 0.0, si2 = 0.0;
        for (long k = 0; k < ni; ++k) {
            double u = rng.uniform(), v = rng.uniform();
            if (u + v > 1.0) {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            const double val = raw_density(c + a * u + b * v);
            si += val;
            si2 += val * val;
        }
        const double mean = si / ni;
        const double var = std::max(0.0, si2 / ni - mean * mean) / std::max<long>(1, ni - 1);
        sum += areas[i] * mean;
        sum2 += areas[i] * areas[i] * var;
        count += ni;
    }
    out.value = sum / Z_;
    out.std_error = std::sqrt(sum2) / Z_;
    out.samples = count;
    return out;
}

McResult WeightFunction::mc_weighted_volume3(const Polytope& P, Rng& rng, long total_samples, double target_se) const {
    McResult out;
    if (P.dim != 3 || P.degenerate) return out;
    Vec3 c{0, 0, 0};
    for (const Vec3& v : P.verts3) c = c + v;
    c = c * (1.0 / static_cast<double>(P.verts3.size()));
    std::vector<double> vols(P.facets.size());
    double total_vol = 0.0;
    for (size_t i = 0; i < P.facets.size(); ++i) {
        const auto& f = P.facets[i];
        vols[i] = dot(P.verts3[f[0]] - c, cross(P.verts3[f[1]] - c, P.verts3[f[2]] - c)) / 6.0;
        total_vol += vols[i];
    }
    double sum = 0.0, sum2 = 0.0;
    long count = 0;
    for (size_t i = 0; i < P.facets.size(); ++i) {
        const long ni = std::max<long>(16, static_cast<long>(total_samples * std::abs(vols[i]) / total_vol));
        const auto& f = P.facets[i];
        const Vec3 a = P.verts3[f[0]] - c, b = P.verts3[f[1]] - c, d = P.verts3[f[2]] - c;
        double si = 0.0, si2 = 0.0;
        for (long k = 0; k < ni; ++k) {
            // Uniform barycentric coordinates in a tetrahedron via sorted uniforms.
            double u[3] = {rng.uniform(), rng.uniform(), rng.uniform()};
            std::sort(u, u + 3);
            const double w0 = u[0], w1 = u[1] - u[0], w2 = u[2] - u[1], w3 = 1.0 - u[2];
            (void)w3;
            const Vec3 x = c + a * w0 + b * w1 + d * w2;
            const double val = raw_density3(x);
            si += val;
            si2 += val * val;
        }
        const double mean = si / ni;
        const double var = std::max(0.0, si2 / ni - mean * mean) / std::max<long>(1, ni - 1);
        sum += vols[i] * mean;
        sum2 += vols[i] * vols[i] * var;
        count += ni;
    }
    out.value = sum;
    out.std_error = std::sqrt(sum2);
    out.samples = count;
    if (target_se > 0.0 && out.std_error > target_se) {
        std::ostringstream os;
        os << "mc_weighted_volume3: standard error " << out.std_error << " exceeds target " << target_se
           << " after " << count << " samples";
        throw std::runtime_error(os.str());
    }
    return out;
}

double WeightFunction::hilbert_grid_refinement_delta(int probes) const {
    if (kind_ != Kind::HilbertBusemann && kind_ != Kind::HilbertHolmesThompson) return 0.0;
    WeightFunction coarse = hilbert(K_, C_, kind_ == Kind::HilbertHolmesThompson,
                                    {grid_.n_alpha / 2, grid_.n_s / 2});
    Rng rng(20250808);
    double worst = 0.0;
    for (int i = 0; i < probes; ++i) {
        const double alpha = rng.uniform(0.0, kTwoPi);
        const double s = rng.uniform(0.0, 0.999);
        const Vec2 x = dir(alpha) * (s * convex_ray_exit(K_->proxy(), {0, 0}, dir(alpha)));
        const double a = raw_density(x), b = coarse.raw_density(x);
        worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    return worst;
}

double cap_measure(const SmoothBody& body, const WeightFunction& w, Vec2 u, double t) {
    // Keep {x . u >= t}: clip_polygon keeps the minus side, so flip signs.
    const std::vector<Vec2> cap = clip_polygon(body.proxy(), -u, -t);
    if (cap.size() < 3) return 0.0;
    const double m = w.weighted_volume(cap);
    return std::clamp(m, 0.0, 1.0);
}

}  // namespace polylab
