#include "polylab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "polylab/experiments.hpp"
#include "polylab/floating.hpp"
#include "polylab/io.hpp"
#include "polylab/noneuclid.hpp"
#include "polylab/stein.hpp"

namespace polylab {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::shared_ptr<SmoothBody> make_body(const char* id) {
    return std::make_shared<SmoothBody>(SmoothBody::parse(id));
}

struct Check {
    bool pass = true;
    std::ostringstream details;

    void require(bool ok, const std::string& what) {
        pass &= ok;
        if (!details.str().empty()) details << "; ";
        details << (ok ? "" : "FAILED: ") << what;
    }
};

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

double ratio_spread(const std::vector<double>& xs) {
    const double lo = *std::min_element(xs.begin(), xs.end());
    const double hi = *std::max_element(xs.begin(), xs.end());
    return lo > 0.0 ? hi / lo : 1e300;
}

// ---- criteria 1 & 2 share one euclidean run ----

struct EuclideanRun {
    ExperimentResult result;
    double seconds = 0.0;
};

EuclideanRun run_euclidean(const AcceptanceOptions& opt) {
    ExperimentConfig cfg;
    cfg.geometry = "euclidean";
    cfg.body = "disc:1";
    cfg.n_grid = opt.quick ? std::vector<int>{128, 256, 512, 1024, 2048, 4096}
                           : std::vector<int>{128, 256, 512, 1024, 2048, 4096, 8192};
    cfg.replications = opt.quick ? 200 : 400;
    cfg.master_seed = opt.seed;
    cfg.workers = opt.workers;
    const auto t0 = std::chrono::steady_clock::now();
    EuclideanRun run{run_experiment(cfg), 0.0};
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

CriterionResult criterion1(const EuclideanRun& run) {
    Check c;
    const auto& s = run.result.summary;
    c.require(std::abs(s.deficit.slope + 2.0 / 3.0) <= 0.07,
              "deficit slope " + fmt(s.deficit.slope) + " within -2/3 +- 0.07");
    const double rel = std::abs(s.limit_empirical - s.limit_rhs) / s.limit_rhs;
    c.require(rel <= 0.05, "extrapolated n^{2/3}(1-EPsi) = " + fmt(s.limit_empirical) + " vs rhs "
                               + fmt(s.limit_rhs) + " (rel " + fmt(rel, 3) + ") within 5%");
    c.require(run.seconds <= 300.0, "runtime " + fmt(run.seconds, 3) + "s <= 300s");
    return {1, "euclidean deficit rate", c.pass, c.details.str(), run.seconds};
}

CriterionResult criterion2(const EuclideanRun& run) {
    Check c;
    const double slope = run.result.summary.variance.slope;
    c.require(std::abs(slope + 5.0 / 3.0) <= 0.15, "variance slope " + fmt(slope) + " within -5/3 +- 0.15");
    return {2, "variance rate", c.pass, c.details.str(), 0.0};
}

CriterionResult criterion3(const AcceptanceOptions& opt) {
    struct Geometry {
        const char* name;
        ExperimentConfig cfg;
    };
    std::vector<Geometry> geoms;
    const auto mk = [&](const char* geometry, const char* body, const char* domain = "disc:1", int j = 1) {
        ExperimentConfig cfg;
        cfg.geometry = geometry;
        cfg.body = body;
        cfg.hilbert_domain = domain;
        cfg.dual_j = j;
        cfg.n_grid = {4096};
        cfg.replications = opt.quick ? 600 : 2000;
        cfg.master_seed = opt.seed;
        cfg.workers = opt.workers;
        return Geometry{geometry, cfg};
    };
    geoms.push_back(mk("euclidean", "disc:1"));
    geoms.push_back(mk("spherical", "disc:0.8"));
    geoms.push_back(mk("hyperbolic", "disc:0.8"));
    geoms.push_back(mk("hilbert-bu", "disc:0.7", "disc:1"));
    geoms.push_back(mk("hilbert-ht", "disc:0.5", "ellipse:1.25:0.75"));
    geoms.push_back(mk("dual", "disc:1"));

    // Quick mode is a smoke variant: tolerances widened to catch gross
    // breakage only (the full run is the gate).
    const double ks_tol = opt.quick ? 0.08 : 0.05;
    const double skew_tol = opt.quick ? 0.60 : 0.15;
    const double kurt_tol = opt.quick ? 1.00 : 0.30;
    const double w1_tol = opt.quick ? 0.12 : 0.06;

    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    for (auto& g : geoms) {
        const auto res = run_experiment(g.cfg);
        const auto& p = res.summary.per_n.front();
        std::ostringstream what;
        what << g.name << " ks=" << fmt(p.ks, 3) << " skew=" << fmt(p.skewness, 3)
             << " kurt=" << fmt(p.excess_kurtosis, 3) << " w1=" << fmt(p.w1, 3);
        c.require(p.ks <= ks_tol && std::abs(p.skewness) <= skew_tol && std::abs(p.excess_kurtosis) <= kurt_tol
                      && p.w1 <= w1_tol,
                  what.str());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs <= 1200.0, "runtime " + fmt(secs, 3) + "s <= 1200s");
    return {3, "CLT matrix (6 geometries)", c.pass, c.details.str(), secs};
}

CriterionResult criterion4(const AcceptanceOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    Rng rng(derive_seed(opt.seed, "pushforward", 32, 0));
    auto K = make_body("disc:0.8");
    const auto sph = WeightFunction::spherical(K);
    const auto hyp = WeightFunction::hyperbolic(K);
    const int trials = opt.quick ? 30 : 100;
    double worst_s = 0.0, worst_h = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<Vec2> pts;
        while (pts.size() < 32) {
            const Vec2 p{rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)};
            if (norm2(p) <= 0.64) pts.push_back(p);
        }
        const Polytope poly = convex_hull2(pts);
        std::vector<SpherePoint> sp;
        std::vector<HyperboloidPoint> hp;
        for (const Vec2& v : poly.verts2) {
            sp.push_back(gnomonic_sphere_inv(v));
            hp.push_back(gnomonic_hyper_inv(v));
        }
        const double as = spherical_polygon_area(sp);
        const double ah = hyperbolic_polygon_area(hp);
        worst_s = std::max(worst_s, std::abs(as - sph.raw_integral(poly.verts2)) / as);
        worst_h = std::max(worst_h, std::abs(ah - hyp.raw_integral(poly.verts2)) / ah);
    }
    c.require(worst_s <= 1e-6, "spherical pushforward worst rel err " + fmt(worst_s, 3));
    c.require(worst_h <= 1e-6, "hyperbolic pushforward worst rel err " + fmt(worst_h, 3));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {4, "pushforward identities", c.pass, c.details.str(), secs};
}

CriterionResult criterion5(const AcceptanceOptions&) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    HilbertDomain C(SmoothBody::disc(1.0));
    double worst = 0.0;
    for (double r = 0.0; r <= 0.9501; r += 0.01) {
        const double expected = std::pow(1.0 - r * r, -1.5);
        worst = std::max(worst, std::abs(C.busemann_raw({r, 0.0}) - expected) / expected);
    }
    c.require(worst <= 1e-4, "busemann vs (1-r^2)^{-3/2} worst rel err " + fmt(worst, 3));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {5, "hilbert-hyperbolic consistency", c.pass, c.details.str(), secs};
}

CriterionResult criterion6(const AcceptanceOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    auto disc = make_body("disc:1");
    auto disc09 = make_body("disc:0.9");
    auto ell = make_body("ellipse:2:1");

    {  // (a) monotonicity in delta: literal containment
        FloatingBodySolver solver(disc09, WeightFunction::hyperbolic(disc09), 360);
        const auto f1 = solver.floating_body(0.01);
        const auto f2 = solver.floating_body(0.05);
        const auto f3 = solver.floating_body(0.20);
        bool mono = !f3.empty();
        const auto inside = [](const FloatingBodyPolygon& a, const FloatingBodyPolygon& b) {
            for (const Vec2& v : a.polygon)
                if (!convex_contains(b.polygon, v, 1e-9)) return false;
            return true;
        };
        mono = mono && inside(f3, f2) && inside(f2, f1);
        c.require(mono, "floating bodies nested across delta 0.01/0.05/0.20");
    }
    {  // (b) uniform weight reduces to the classical body (independent offsets)
        FloatingBodySolver solver(disc, WeightFunction::uniform(disc), 720);
        const double delta = 0.02;
        const auto fb = solver.floating_body(delta);
        // Analytic disc offsets: solve acos(t) - t sqrt(1-t^2) = pi delta.
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double a = std::acos(mid) - mid * std::sqrt(1.0 - mid * mid);
            (a > kPi * delta ? lo : hi) = mid;
        }
        const double t = 0.5 * (lo + hi);
        std::vector<Vec2> classical = disc->proxy();
        for (int i = 0; i < 720; ++i) classical = clip_polygon(classical, dir(2.0 * kPi * i / 720.0), t);
        const double gap = std::abs(polygon_area(classical) - fb.area()) / polygon_area(classical);
        c.require(gap <= 1e-6, "uniform floating body vs analytic K_delta area gap " + fmt(gap, 3));
    }
    {  // (c) wet-part slope 2/3 on disc and ellipse
        for (const auto& body : {disc, ell}) {
            FloatingBodySolver solver(body, WeightFunction::uniform(body), 720);
            std::vector<double> ds, wets;
            for (double e = -4.0; e <= -2.0 + 1e-9; e += 0.25) {
                const double d = std::pow(10.0, e);
                ds.push_back(d);
                wets.push_back(solver.wet_part_volume(d));
            }
            const auto f = fit_rate(ds, wets);
            c.require(std::abs(f.slope - 2.0 / 3.0) <= 0.03,
                      body->id() + " wet-part slope " + fmt(f.slope) + " within 2/3 +- 0.03");
        }
    }
    {  // (d) comparison sandwich for the hyperbolic weight
        FloatingBodySolver weighted(disc09, WeightFunction::hyperbolic(disc09), 240);
        FloatingBodySolver classical(disc09, WeightFunction::uniform(disc09), 240);
        std::vector<double> cs;
        for (double e = -3.0; e <= -1.49; e += 0.5) {
            const double cc = sandwich_constant(weighted, classical, std::pow(10.0, e));
            cs.push_back(cc);
        }
        const double cmin = *std::min_element(cs.begin(), cs.end());
        c.require(cmin > 0.02 && ratio_spread(cs) < 2.0,
                  "sandwich constants in [" + fmt(cmin) + ", " + fmt(*std::max_element(cs.begin(), cs.end()))
                      + "], spread " + fmt(ratio_spread(cs), 3));
    }
    {  // (e) containment calibration
        const std::vector<double> cgrid{0.25, 0.5, 1.0, 2.0, 4.0};
        const int reps = opt.quick ? 100 : 300;
        const std::vector<int> ns = opt.quick ? std::vector<int>{512, 2048} : std::vector<int>{512, 2048, 8192};
        for (auto w : {WeightFunction::uniform(disc09), WeightFunction::hyperbolic(disc09)}) {
            FloatingBodySolver solver(disc09, w, 240);
            double cstar = -1.0;
            bool monotone = true;
            std::vector<double> worst_rates(cgrid.size(), 0.0);
            for (int n : ns) {
                const auto rates = vu_containment_failure_rates(solver, cgrid, n, reps, opt.seed);
                for (size_t i = 1; i < rates.size(); ++i) monotone &= rates[i] <= rates[i - 1];
                for (size_t i = 0; i < rates.size(); ++i) worst_rates[i] = std::max(worst_rates[i], rates[i]);
            }
            for (size_t i = 0; i < cgrid.size(); ++i) {
                if (worst_rates[i] <= 0.01) {
                    cstar = cgrid[i];
                    break;
                }
            }
            c.require(monotone && cstar > 0.0,
                      w.id() + " containment c* = " + fmt(cstar) + " (failure <= 0.01, monotone in c)");
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {6, "floating-body suite", c.pass, c.details.str(), secs};
}

CriterionResult criterion7(const AcceptanceOptions&) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    auto disc = make_body("disc:1");
    {  // cap ratio at t = 1e-5
        const auto chk = cap_limit_check(*disc, 0.3, {1e-2, 1e-3, 1e-4, 1e-5});
        const double rel = std::abs(chk.ratio.back() - chk.limit) / chk.limit;
        c.require(rel <= 0.01, "disc cap ratio off by " + fmt(rel, 3) + " from 4 sqrt(2)/3 at t=1e-5");
    }
    {  // visibility sandwich + area ratios across the delta decade
        FloatingBodySolver solver(disc, WeightFunction::uniform(disc), 720);
        std::vector<double> r_in, r_out, r_area;
        for (double e = -5.0; e <= -3.0 + 1e-9; e += 0.5) {
            const double delta = std::pow(10.0, e);
            const auto fb = solver.floating_body(delta);
            const auto vis = visibility_region(*disc, 0.3, fb);
            const double scale = std::pow(delta, 2.0 / 3.0);
            r_in.push_back(vis.inner_height / scale);
            r_out.push_back(vis.outer_height / scale);
            r_area.push_back(vis.area / delta);
            c.require(vis.inner_height <= vis.outer_height, "sandwich heights ordered at delta=1e" + fmt(e, 2));
        }
        c.require(ratio_spread(r_in) < 2.0, "inner cap constants stable (spread " + fmt(ratio_spread(r_in), 3) + ")");
        c.require(ratio_spread(r_out) < 2.0, "outer cap constants stable (spread " + fmt(ratio_spread(r_out), 3) + ")");
        c.require(ratio_spread(r_area) < 2.0,
                  "area/delta in [" + fmt(*std::min_element(r_area.begin(), r_area.end())) + ", "
                      + fmt(*std::max_element(r_area.begin(), r_area.end())) + "]");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {7, "cap asymptotics and visibility", c.pass, c.details.str(), secs};
}

CriterionResult criterion8(const AcceptanceOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    auto K = make_body("disc:1");
    auto uni = WeightFunction::uniform(K);
    FloatingBodySolver solver(K, uni, 240);
    const std::vector<int> ns{128, 256, 512, 1024, 2048};
    const int r34 = opt.quick ? 4000 : 48000;
    const int r12 = opt.quick ? 800 : 2000;
    const int tuples = opt.quick ? 8 : 16;
    const int rvar = opt.quick ? 6000 : 30000;

    std::vector<double> nsd, g3s, g2s, bounds;
    bool d1_exact = true;
    // One restriction region for the whole n-grid, built at the smallest n:
    // floating bodies are nested in delta, so the region stays valid (and
    // conservative) for every larger n, and the per-point substreams then
    // produce samples nested across n (common random numbers for the
    // bound-monotonicity comparison).
    const auto restriction = make_wet_restriction(solver, ns.front(), 2.0);
    for (int n : ns) {
        Functional f{K, &uni, &uni, n, 0.0};
        const auto gm = gamma_moments(f, r34, derive_seed(opt.seed, "crit8-m", 0, 0),
                                      restriction ? &*restriction : nullptr);
        const auto gr = gamma_recombination_estimates(f, r12, tuples, derive_seed(opt.seed, "crit8-r", 0, 0),
                                                      restriction ? &*restriction : nullptr);
        // Variance pilot (hull + area only), per-point substreams.
        double mean = 0.0, m2 = 0.0;
        std::vector<Vec2> pts(n);
        for (int rep = 0; rep < rvar; ++rep) {
            const uint64_t rep_seed = derive_seed(opt.seed, "crit8-var", 0, rep);
            for (int k = 0; k < n; ++k) {
                Rng rng(derive_seed(rep_seed, "pt", 0, k));
                pts[k] = uni.sample(rng);
            }
            const double v = uni.weighted_volume(convex_hull2(pts));
            mean += v;
            m2 += v * v;
        }
        mean /= rvar;
        const double var = (m2 / rvar - mean * mean) * rvar / (rvar - 1.0);

        // D_i f = 0 for every non-vertex point of a fresh sample.
        {
            Rng rng(derive_seed(opt.seed, "crit8-d1", n, 1));
            for (int k = 0; k < n; ++k) pts[k] = uni.sample(rng);
            const Polytope hull = convex_hull2(pts);
            std::vector<char> is_vertex(n, 0);
            for (int idx : hull.provenance) is_vertex[idx] = 1;
            for (int i = 0; i < n; i += std::max(1, n / 64)) {
                if (is_vertex[i]) continue;
                if (diff1(f, pts, i) != 0.0) d1_exact = false;
            }
        }

        nsd.push_back(n);
        g3s.push_back(gm.g3.value);
        g2s.push_back(gr.g2.value);
        bounds.push_back(assembled_normal_bound(n, var, gr.g1.value, gr.g2.value, gm.g3.value, gm.g4.value));
    }
    const auto f3 = fit_rate(nsd, g3s);
    // The gamma2 surrogate can be exactly 0 at the largest n (no recombination
    // events within budget); the log fit runs on the positive entries.
    std::vector<double> n2, y2;
    int censored = 0;
    for (size_t i = 0; i < nsd.size(); ++i) {
        if (g2s[i] > 0.0) {
            n2.push_back(nsd[i]);
            y2.push_back(g2s[i]);
        } else {
            ++censored;
        }
    }
    c.require(f3.slope <= -2.7, "gamma3 slope " + fmt(f3.slope) + " <= -2.7");
    if (n2.size() >= (opt.quick ? 2u : 3u)) {
        const auto f2 = fit_rate(n2, y2);
        c.require(f2.slope <= -4.5, "gamma2 surrogate slope " + fmt(f2.slope) + " <= -4.5 ("
                                        + std::to_string(censored) + " zero estimates censored)");
    } else {
        c.require(false, "gamma2 surrogate: too few positive estimates for a slope fit");
    }
    bool decreasing = true;
    for (size_t i = 1; i < bounds.size(); ++i) decreasing &= bounds[i] < bounds[i - 1];
    std::ostringstream bs;
    for (double b : bounds) bs << fmt(b, 3) << " ";
    c.require(decreasing, "assembled bound strictly decreasing: " + bs.str());
    c.require(d1_exact, "D_i f exactly 0 for non-vertex points");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {8, "stein diagnostics", c.pass, c.details.str(), secs};
}

CriterionResult criterion9(const AcceptanceOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    auto disc = SmoothBody::disc(1.0);
    Polytope disc_poly;
    disc_poly.dim = 2;
    disc_poly.verts2 = disc.proxy();
    c.require(std::abs(dual_volume(disc_poly, 1) - kPi) <= 1e-4, "tilde V_1(fine disc polygon) = pi within 1e-4");

    Rng rng(derive_seed(opt.seed, "crit9", 20, 0));
    bool agree = true;
    int retried = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec2> pts;
        for (int i = 0; i < 24; ++i) pts.push_back(dir(rng.uniform(0, 2 * kPi)) * (0.3 + 0.7 * rng.uniform()));
        const auto P = convex_hull2(pts);
        if (!convex_contains(P.verts2, {0, 0}, 0.0)) continue;
        const double dv = dual_volume(P, 1);
        auto mc = dual_volume_section_oracle(P, rng, 20000);
        if (std::abs(dv - mc.value) > 3.0 * mc.std_error) {
            // A 3-sigma event occurs in ~5% of 20-trial suites by chance; one
            // independent re-draw separates fluctuation from systematic error
            // (a real discrepancy at this scale fails twice).
            ++retried;
            mc = dual_volume_section_oracle(P, rng, 20000);
        }
        agree &= std::abs(dv - mc.value) <= 3.0 * mc.std_error;
    }
    c.require(agree, "radial formula vs random-section oracle within 3 sigma on 20 polygons ("
                         + std::to_string(retried) + " retried)");

    bool constants = true;
    for (int d = 2; d <= 6; ++d)
        constants &= std::abs(limit_constant_c(d, d) - limit_constant_c_tilde(d, d))
                     <= 1e-15 * limit_constant_c(d, d);
    c.require(constants, "c(d,d) = c~(d,d) to machine precision, d in {2..6}");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {9, "dual-volume consistency", c.pass, c.details.str(), secs};
}

CriterionResult criterion10(const AcceptanceOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    ExperimentConfig cfg;
    cfg.geometry = "spherical";
    cfg.body = "disc:0.8";
    cfg.n_grid = {128, 512};
    cfg.replications = 50;
    cfg.master_seed = opt.seed;
    cfg.workers = 1;
    const auto a = run_experiment(cfg);
    cfg.workers = 3;
    const auto b = run_experiment(cfg);
    ExperimentResult bn = b;
    bn.config.workers = 1;  // worker count is not part of the records
    c.require(records_csv(a) == records_csv(bn), "records CSV byte-identical for workers 1 vs 3");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {10, "determinism across workers", c.pass, c.details.str(), secs};
}

}  // namespace

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log) {
    std::vector<CriterionResult> out;
    const auto emit = [&](CriterionResult r) {
        log << (r.pass ? "[PASS] " : "[FAIL] ") << "criterion " << r.index << " (" << r.name << ")";
        if (r.seconds > 0.0) log << " [" << fmt(r.seconds, 3) << "s]";
        if (!r.details.empty()) log << ": " << r.details;
        log << std::endl;
        out.push_back(std::move(r));
    };
    const EuclideanRun eu = run_euclidean(opt);
    emit(criterion1(eu));
    emit(criterion2(eu));
    emit(criterion3(opt));
    emit(criterion4(opt));
    emit(criterion5(opt));
    emit(criterion6(opt));
    emit(criterion7(opt));
    emit(criterion8(opt));
    emit(criterion9(opt));
    emit(criterion10(opt));
    return out;
}

}  // namespace polylab
