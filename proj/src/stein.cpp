#include "polylab/stein.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polylab {

namespace {

// Psi change from inserting p into a convex ring: the two new edges' cones
// minus the replaced chain's cones. Identical chains give an exact 0.0, which
// is what makes the D_i f = 0 and D_{i,j} f = 0 cases exact.
double insertion_delta_psi(const WeightFunction& psi, const std::vector<Vec2>& ring, Vec2 p) {
    const size_t n = ring.size();
    std::vector<char> visible(n);
    bool any = false;
    for (size_t i = 0; i < n; ++i) {
        visible[i] = orient2d(ring[i], ring[(i + 1) % n], p) < 0.0;
        any |= static_cast<bool>(visible[i]);
    }
    if (!any) return 0.0;
    size_t s = 0;
    while (!(visible[s] && !visible[(s + n - 1) % n])) ++s;
    const GaussRule& sr = gauss_legendre(psi.cone_s_order());
    const GaussRule& tr = gauss_legendre(psi.cone_tau_order());
    const auto g = [&](Vec2 x) { return psi.raw_density(x); };
    double removed = 0.0;
    size_t e = s;
    while (visible[e]) {
        removed += cone_integral(ring[e], ring[(e + 1) % n], g, sr, tr);
        e = (e + 1) % n;
    }
    const double added = cone_integral(ring[s], p, g, sr, tr) + cone_integral(p, ring[e], g, sr, tr);
    return (added - removed) / psi.normalization();
}

struct Copies {
    std::vector<Vec2> pts[3];  // X, X', X'' each of size n
};

Vec2 sample_maybe_wet(const WeightFunction& phi, const WetRestriction* r, bool restricted, Rng& rng) {
    if (!restricted || r == nullptr) return phi.sample(rng);
    for (int it = 0; it < 100000; ++it) {
        const Vec2 x = phi.sample(rng);
        if (!convex_contains(r->floating_polygon, x, 0.0)) return x;
    }
    throw std::runtime_error("wet-part rejection sampling stalled");
}

// Every point gets its own derived substream, so samples are nested across n
// for a fixed replication seed (common random numbers: n-to-n comparisons of
// the estimates see strongly correlated noise).
Vec2 sample_point(const WeightFunction& phi, const WetRestriction* r, bool restricted, uint64_t rep_seed,
                  uint64_t copy, uint64_t k) {
    Rng rng(derive_seed(rep_seed, "pt", copy, k));
    return sample_maybe_wet(phi, r, restricted, rng);
}

// Draws three independent copies; slots in `restricted_slots` (slot, copy)
// are forced into the wet part.
Copies draw_copies(const Functional& f, const WetRestriction* r,
                   const std::vector<std::pair<int, int>>& restricted_slots, uint64_t rep_seed) {
    Copies c;
    const auto is_restricted = [&](int slot, int copy) {
        for (const auto& sc : restricted_slots)
            if (sc.first == slot && sc.second == copy) return true;
        return false;
    };
    for (int copy = 0; copy < 3; ++copy) {
        c.pts[copy].resize(f.n);
        for (int k = 0; k < f.n; ++k)
            c.pts[copy][k] = sample_point(*f.phi, r, is_restricted(k, copy), rep_seed, copy, k);
    }
    return c;
}

std::vector<Vec2> recombine(const Copies& c, const std::vector<uint8_t>& pattern, const std::vector<int>& skip) {
    std::vector<Vec2> out;
    out.reserve(pattern.size());
    for (size_t k = 0; k < pattern.size(); ++k) {
        if (std::find(skip.begin(), skip.end(), static_cast<int>(k)) != skip.end()) continue;
        out.push_back(c.pts[pattern[k]][k]);
    }
    return out;
}

// D_i f for the vector given by `pattern`, via base hull + ring insertion.
double diff1_of_pattern(const Functional& f, const Copies& c, const std::vector<uint8_t>& pattern, int i) {
    const std::vector<Vec2> rest = recombine(c, pattern, {i});
    const Polytope base = convex_hull2(rest);
    if (base.degenerate) return 0.0;
    return insertion_delta_psi(*f.psi, base.verts2, c.pts[pattern[i]][i]);
}

// D_{i,j} f via two insertion deltas over the shared base hull.
double diff2_of_pattern(const Functional& f, const Copies& c, const std::vector<uint8_t>& pattern, int i, int j) {
    const std::vector<Vec2> rest = recombine(c, pattern, {i, j});
    const Polytope base = convex_hull2(rest);
    if (base.degenerate) return 0.0;
    const Vec2 pi = c.pts[pattern[i]][i];
    const Vec2 pj = c.pts[pattern[j]][j];
    const double d_without = insertion_delta_psi(*f.psi, base.verts2, pi);
    std::vector<Vec2> with_j = base.verts2;
    if (!insert_into_ring(with_j, pj)) return 0.0;  // x_j interior: both brackets coincide
    const double d_with = insertion_delta_psi(*f.psi, with_j, pi);
    return d_with - d_without;
}

// Per-coordinate copy choices derived by hashing, so the pattern of a tuple is
// stable under changes of n (the first k coordinates agree for every n > k).
std::vector<uint8_t> random_pattern(int n, uint64_t pattern_seed, const char* which) {
    std::vector<uint8_t> pat(n);
    for (int k = 0; k < n; ++k) pat[k] = static_cast<uint8_t>(derive_seed(pattern_seed, which, 0, k) % 3);
    return pat;
}

MomentEstimate summarize(const std::vector<double>& vals) {
    MomentEstimate e;
    e.replications = static_cast<long>(vals.size());
    if (vals.empty()) return e;
    const double mean = std::accumulate(vals.begin(), vals.end(), 0.0) / vals.size();
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    e.value = mean;
    e.std_error = vals.size() > 1 ? std::sqrt(ss / (vals.size() - 1.0) / vals.size()) : 0.0;
    return e;
}

}  // namespace

double Functional::psi_of(std::span<const Vec2> pts) const {
    const Polytope h = convex_hull2(pts);
    if (h.degenerate) throw std::runtime_error("Functional: degenerate hull (discarded replication)");
    return psi->weighted_volume(h);
}

double Functional::value(std::span<const Vec2> pts) const { return psi_of(pts) - expectation; }

double diff1(const Functional& f, const std::vector<Vec2>& pts, int i) {
    if (static_cast<int>(pts.size()) < f.K->dimension() + 2) throw std::invalid_argument("diff1: need n >= d+2");
    std::vector<Vec2> rest;
    rest.reserve(pts.size() - 1);
    for (size_t k = 0; k < pts.size(); ++k)
        if (static_cast<int>(k) != i) rest.push_back(pts[k]);
    const Polytope base = convex_hull2(rest);
    if (base.degenerate) return 0.0;
    return insertion_delta_psi(*f.psi, base.verts2, pts[i]);
}

double diff2(const Functional& f, const std::vector<Vec2>& pts, int i, int j) {
    if (i == j) throw std::invalid_argument("diff2: indices must differ");
    if (i > j) std::swap(i, j);  // canonical order keeps D_{i,j} = D_{j,i} bit-exact
    std::vector<Vec2> rest;
    rest.reserve(pts.size() - 2);
    for (size_t k = 0; k < pts.size(); ++k)
        if (static_cast<int>(k) != i && static_cast<int>(k) != j) rest.push_back(pts[k]);
    const Polytope base = convex_hull2(rest);
    if (base.degenerate) return 0.0;
    const double d_without = insertion_delta_psi(*f.psi, base.verts2, pts[i]);
    std::vector<Vec2> with_j = base.verts2;
    if (!insert_into_ring(with_j, pts[j])) return 0.0;
    return insertion_delta_psi(*f.psi, with_j, pts[i]) - d_without;
}

std::optional<WetRestriction> make_wet_restriction(const FloatingBodySolver& solver, int n, double c_safe) {
    const double delta = c_safe * std::log(static_cast<double>(n)) / n;
    FloatingBodyPolygon fb = solver.floating_body(delta);
    if (fb.empty()) return std::nullopt;
    WetRestriction r;
    r.wet_mass = 1.0 - solver.weight().weighted_volume(fb.polygon);
    r.floating_polygon = std::move(fb.polygon);
    if (r.wet_mass <= 0.0 || r.wet_mass > 1.0) return std::nullopt;
    return r;
}

GammaMoments gamma_moments(const Functional& f, int replications, uint64_t master_seed,
                           const WetRestriction* restriction) {
    std::vector<double> t3(replications), t4(replications);
    const double lr = restriction ? restriction->wet_mass : 1.0;
    std::vector<Vec2> pts(f.n);
    for (int rep = 0; rep < replications; ++rep) {
        const uint64_t rep_seed = derive_seed(master_seed, "gamma-moments", 0, rep);
        for (int k = 0; k < f.n; ++k)
            pts[k] = sample_point(*f.phi, restriction, k == 0, rep_seed, 0, k);
        const double d = diff1(f, pts, 0);
        const double a = std::abs(d);
        t3[rep] = lr * a * a * a;
        t4[rep] = lr * a * a * a * a;
    }
    GammaMoments out;
    out.g3 = summarize(t3);
    out.g4 = summarize(t4);
    return out;
}

GammaRecombination gamma_recombination_estimates(const Functional& f, int replications, int tuples,
                                                 uint64_t master_seed, const WetRestriction* restriction) {
    GammaRecombination out;
    out.tuples = tuples;
    MomentEstimate best1, best2;
    for (int tup = 0; tup < tuples; ++tup) {
        const uint64_t pattern_seed = derive_seed(master_seed, "gamma-patterns", 0, tup);
        const auto pat_y = random_pattern(f.n, pattern_seed, "y");
        const auto pat_y2 = random_pattern(f.n, pattern_seed, "y2");
        const auto pat_z = random_pattern(f.n, pattern_seed, "z");
        const auto pat_z2 = random_pattern(f.n, pattern_seed, "z2");

        // gamma_2 structure: 1{D_{1,2} f(Y) != 0} (D_1 f(Z))^2 (D_2 f(Z'))^2.
        const std::vector<std::pair<int, int>> restricted2{
            {0, pat_y[0]}, {0, pat_z[0]}, {1, pat_y[1]}, {1, pat_z2[1]}};
        // gamma_1 structure: indicators on D_{1,2} f(Y), D_{1,3} f(Y'),
        // factors (D_2 f(Z))^2 (D_3 f(Z'))^2.
        const std::vector<std::pair<int, int>> restricted1{
            {0, pat_y[0]}, {0, pat_y2[0]}, {1, pat_y[1]}, {1, pat_z[1]}, {2, pat_y2[2]}, {2, pat_z2[2]}};
        const auto distinct = [](std::vector<std::pair<int, int>> v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            return static_cast<int>(v.size());
        };
        const double lr2 = restriction ? std::pow(restriction->wet_mass, distinct(restricted2)) : 1.0;
        const double lr1 = restriction ? std::pow(restriction->wet_mass, distinct(restricted1)) : 1.0;

        std::vector<double> v1(replications), v2(replications);
        for (int rep = 0; rep < replications; ++rep) {
            const uint64_t rep_seed = derive_seed(master_seed, "gamma-recomb", tup, rep);
            {
                const Copies c = draw_copies(f, restriction, restricted2, derive_seed(rep_seed, "g2", 0, 0));
                const double ind = diff2_of_pattern(f, c, pat_y, 0, 1) != 0.0 ? 1.0 : 0.0;
                if (ind == 0.0) {
                    v2[rep] = 0.0;
                } else {
                    const double dz = diff1_of_pattern(f, c, pat_z, 0);
                    const double dz2 = diff1_of_pattern(f, c, pat_z2, 1);
                    v2[rep] = lr2 * dz * dz * dz2 * dz2;
                }
            }
            {
                const Copies c = draw_copies(f, restriction, restricted1, derive_seed(rep_seed, "g1", 0, 0));
                const double ind_a = diff2_of_pattern(f, c, pat_y, 0, 1) != 0.0 ? 1.0 : 0.0;
                const double ind_b = ind_a == 0.0 ? 0.0 : (diff2_of_pattern(f, c, pat_y2, 0, 2) != 0.0 ? 1.0 : 0.0);
                if (ind_b == 0.0) {
                    v1[rep] = 0.0;
                } else {
                    const double dz = diff1_of_pattern(f, c, pat_z, 1);
                    const double dz2 = diff1_of_pattern(f, c, pat_z2, 2);
                    v1[rep] = lr1 * dz * dz * dz2 * dz2;
                }
            }
        }
        const MomentEstimate e1 = summarize(v1), e2 = summarize(v2);
        if (tup == 0 || e1.value > best1.value) best1 = e1;
        if (tup == 0 || e2.value > best2.value) best2 = e2;
    }
    out.g1 = best1;
    out.g2 = best2;
    return out;
}

double normal_cdf(double t) { return 0.5 * std::erfc(-t * 0.7071067811865475244); }

static double normal_pdf(double t) { return 0.3989422804014326779 * std::exp(-0.5 * t * t); }

double normal_quantile(double p) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("normal_quantile: p in (0,1)");
    // Bisection bracket then Newton.
    double x = 0.0;
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        x = 0.5 * (lo + hi);
        if (normal_cdf(x) < p)
            lo = x;
        else
            hi = x;
        if (hi - lo < 1e-9) break;
    }
    for (int it = 0; it < 8; ++it) {
        const double f = normal_cdf(x) - p;
        const double d = normal_pdf(x);
        if (d <= 0.0) break;
        x -= f / d;
    }
    return x;
}

double wasserstein1_to_normal(std::vector<double> x) {
    if (x.size() < 2) throw std::invalid_argument("wasserstein1_to_normal: need at least 2 samples");
    std::sort(x.begin(), x.end());
    const double R = static_cast<double>(x.size());
    const auto I = [](double t) { return t * normal_cdf(t) + normal_pdf(t); };
    double w = I(x.front());          // \int_{-inf}^{x_1} Phi
    w += I(x.back()) - x.back();      // \int_{x_R}^{inf} (1 - Phi)
    for (size_t k = 1; k < x.size(); ++k) {
        const double a = x[k - 1], b = x[k];
        if (a == b) continue;
        const double c = static_cast<double>(k) / R;
        const double Fa = normal_cdf(a), Fb = normal_cdf(b);
        if (Fb <= c) {
            w += c * (b - a) - (I(b) - I(a));
        } else if (Fa >= c) {
            w += (I(b) - I(a)) - c * (b - a);
        } else {
            const double q = std::clamp(normal_quantile(c), a, b);
            w += c * (q - a) - (I(q) - I(a));
            w += (I(b) - I(q)) - c * (b - q);
        }
    }
    return w;
}

NormalitySummary normality_summary(std::span<const double> samples) {
    if (samples.size() < 8) throw std::invalid_argument("normality_summary: need at least 8 samples");
    NormalitySummary s;
    std::vector<double> x(samples.begin(), samples.end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double F = normal_cdf(x[i]);
        d = std::max(d, std::max((i + 1.0) / n - F, F - static_cast<double>(i) / n));
    }
    s.ks = d;
    double m1 = 0.0;
    for (double v : x) m1 += v;
    m1 /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double c = v - m1;
        m2 += c * c;
        m3 += c * c * c;
        m4 += c * c * c * c;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        s.skewness = m3 / std::pow(m2, 1.5);
        s.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    }
    s.w1 = wasserstein1_to_normal(x);
    return s;
}

double assembled_normal_bound(int n, double variance, double g1, double g2, double g3, double g4) {
    const double nn = static_cast<double>(n);
    return std::sqrt(nn) / variance
         * (std::sqrt(nn * nn * g1) + std::sqrt(nn * g2) + std::sqrt(nn / variance) * g3 + std::sqrt(g4));
}

}  // namespace polylab
