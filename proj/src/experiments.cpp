#include "polylab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polylab/special.hpp"

namespace polylab {

void ExperimentConfig::validate() const {
    static const std::vector<std::string> kGeoms{"euclidean", "spherical", "hyperbolic",
                                                 "hilbert-bu", "hilbert-ht", "dual"};
    bool ok = false;
    for (const auto& g : kGeoms) ok |= (g == geometry);
    if (!ok) throw std::invalid_argument("unknown geometry: " + geometry);
    if (n_grid.empty()) throw std::invalid_argument("n_grid must be nonempty");
    for (size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw std::invalid_argument("n_grid must be increasing");
    if (n_grid.front() < 4) throw std::invalid_argument("n must be at least d+2");
    if (replications < 8) throw std::invalid_argument("replications must be >= 8");
    if (geometry == "dual" && (dual_j < 1 || dual_j > 2))
        throw std::invalid_argument("dual geometry requires j in {1,..,d} with d = 2");
}

std::string ExperimentConfig::geometry_id() const {
    std::ostringstream os;
    os << geometry << ":" << body;
    if (geometry.rfind("hilbert", 0) == 0) os << ":" << hilbert_domain;
    if (geometry == "dual") os << ":j" << dual_j;
    return os.str();
}

GeometryBinding bind_geometry(const ExperimentConfig& cfg) {
    cfg.validate();
    auto K = std::make_shared<SmoothBody>(SmoothBody::parse(cfg.body));
    const HilbertGridParams grid{cfg.hilbert_grid_alpha, cfg.hilbert_grid_s};
    const auto derive = [&](bool measuring) -> WeightFunction {
        const std::string& override_id = measuring ? cfg.weight_psi : cfg.weight_phi;
        if (!override_id.empty()) return WeightFunction::parse(override_id, K);
        if (cfg.geometry == "euclidean") return WeightFunction::uniform(K);
        if (cfg.geometry == "spherical") return WeightFunction::spherical(K);
        if (cfg.geometry == "hyperbolic") return WeightFunction::hyperbolic(K);
        if (cfg.geometry == "dual")
            return measuring ? WeightFunction::dual_power(K, cfg.dual_j) : WeightFunction::uniform(K);
        auto C = HilbertDomain::parse(cfg.hilbert_domain, cfg.hilbert_direction_m);
        return WeightFunction::hilbert(K, C, cfg.geometry == "hilbert-ht", grid);
    };
    GeometryBinding b{K, derive(false), derive(true), 0.0};
    if (cfg.geometry == "dual") {
        const int d = 2, j = cfg.dual_j;
        b.dual_vj_of_K = binomial(d - 1, j - 1) / ball_volume(d - j) * b.psi.normalization();
    }
    return b;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult out;
    out.config = cfg;
    const GeometryBinding bind = bind_geometry(cfg);
    out.phi_id = bind.phi.id();
    out.psi_id = bind.psi.id();
    const std::string label = cfg.geometry_id();
    std::atomic<long> discarded{0};

    for (int n : cfg.n_grid) {
        std::vector<ReplicationRecord> recs(cfg.replications);
        std::atomic<int> next{0};
        const int nworkers = cfg.workers > 0 ? cfg.workers
                                             : std::max(1u, std::thread::hardware_concurrency());
        const auto worker = [&]() {
            std::vector<Vec2> pts(n);
            for (;;) {
                const int rep = next.fetch_add(1);
                if (rep >= cfg.replications) return;
                const uint64_t seed = derive_seed(cfg.master_seed, label, static_cast<uint64_t>(n),
                                                  static_cast<uint64_t>(rep));
                Polytope hull;
                for (uint64_t attempt = 0;; ++attempt) {
                    Rng rng(attempt == 0 ? seed : derive_seed(seed, "degenerate-retry", n, attempt));
                    for (int k = 0; k < n; ++k) pts[k] = bind.phi.sample(rng);
                    hull = convex_hull2(pts);
                    if (!hull.degenerate) break;
                    discarded.fetch_add(1);
                }
                ReplicationRecord r;
                r.n = n;
                r.rep = rep;
                r.seed = seed;
                r.psi_value = bind.psi.weighted_volume(hull);
                r.hull_vertices = static_cast<int>(hull.vertex_count());
                if (cfg.geometry == "dual") r.vj_value = r.psi_value * bind.dual_vj_of_K;
                recs[rep] = r;
            }
        };
        if (nworkers <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < nworkers; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        out.records.insert(out.records.end(), recs.begin(), recs.end());
    }

    // Summaries (fixed order: records are already (n, rep) sorted).
    ExperimentSummary& s = out.summary;
    s.discarded = discarded.load();
    std::vector<double> ns, deficits, variances;
    for (int n : cfg.n_grid) {
        std::vector<double> vals;
        vals.reserve(cfg.replications);
        for (const auto& r : out.records)
            if (r.n == n) vals.push_back(r.psi_value);
        PerNSummary p;
        p.n = n;
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= (vals.size() - 1.0);
        p.mean = mean;
        p.variance = var;
        p.variance_positive = var > 0.0;
        if (p.variance_positive) {
            const double sd = std::sqrt(var);
            std::vector<double> z(vals.size());
            for (size_t i = 0; i < vals.size(); ++i) z[i] = (vals[i] - mean) / sd;
            const NormalitySummary ns2 = normality_summary(z);
            p.ks = ns2.ks;
            p.skewness = ns2.skewness;
            p.excess_kurtosis = ns2.excess_kurtosis;
            p.w1 = ns2.w1;
        }
        s.per_n.push_back(p);
        ns.push_back(n);
        deficits.push_back(std::max(1e-300, 1.0 - mean));
        variances.push_back(std::max(1e-300, var));
    }
    if (ns.size() >= 2) {
        s.deficit = fit_rate(ns, deficits);
        s.variance = fit_rate(ns, variances);
        // Richardson extrapolation of y = n^{2/3}(1 - mean) with an n^{-2/3}
        // correction model.
        const size_t L = ns.size() - 1;
        const double yl = std::pow(ns[L], 2.0 / 3.0) * deficits[L];
        const double yp = std::pow(ns[L - 1], 2.0 / 3.0) * deficits[L - 1];
        const double xl = std::pow(ns[L], -2.0 / 3.0), xp = std::pow(ns[L - 1], -2.0 / 3.0);
        s.limit_empirical = (yl * xp - yp * xl) / (xp - xl);
    }
    s.limit_rhs = expectation_limit_rhs(*bind.K, bind.phi, bind.psi);
    return out;
}

RateFit fit_rate(std::span<const double> ns, std::span<const double> ys) {
    if (ns.size() != ys.size() || ns.size() < 2) throw std::invalid_argument("fit_rate: need matching inputs (>= 2)");
    const size_t m = ns.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < m; ++i) {
        if (ys[i] <= 0.0) throw std::invalid_argument("fit_rate: ys must be positive");
        const double x = std::log(ns[i]), y = std::log(ys[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    RateFit f;
    const double denom = m * sxx - sx * sx;
    f.slope = (m * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / m;
    double rss = 0.0;
    for (size_t i = 0; i < m; ++i) {
        const double r = std::log(ys[i]) - (f.intercept + f.slope * std::log(ns[i]));
        rss += r * r;
    }
    f.residual = std::sqrt(rss / m);
    return f;
}

double limit_constant_c(int d, int j) {
    if (j < 1 || j > d) throw std::invalid_argument("limit_constant_c: need 1 <= j <= d");
    const double dd = d;
    return 1.0 / (2.0 * ball_volume(d - j)) * binomial(d - 1, j - 1) * (dd + 1.0) / (dd + 3.0)
         * std::exp(-std::lgamma(j + 1.0) + std::lgamma(j + (dd + 3.0) / (dd + 1.0)))
         * std::pow((dd + 1.0) / ball_volume(d - 1), 2.0 / (dd + 1.0));
}

double limit_constant_c_tilde(int d, int j) {
    if (j < 1 || j > d) throw std::invalid_argument("limit_constant_c_tilde: need 1 <= j <= d");
    const double dd = d;
    return 1.0 / (2.0 * ball_volume(d - j)) * binomial(d - 1, j - 1) * (dd + 1.0) / (dd + 3.0)
         * std::exp(-std::lgamma(dd + 1.0) + std::lgamma(dd + (dd + 3.0) / (dd + 1.0)))
         * std::pow((dd + 1.0) / ball_volume(d - 1), 2.0 / (dd + 1.0));
}

double expectation_limit_rhs(const SmoothBody& K, const WeightFunction& phi, const WeightFunction& psi) {
    if (K.dimension() != 2) throw std::invalid_argument("expectation_limit_rhs: 2D bodies only");
    const double zphi = phi.normalization(), zpsi = psi.normalization();
    const auto integrand = [&](Vec2 x, double kappa) {
        const double p = phi.raw_density(x) / zphi;
        const double q = psi.raw_density(x) / zpsi;
        return std::pow(p, -2.0 / 3.0) * std::cbrt(kappa) * q;
    };
    return limit_constant_c(2, 2) * K.boundary_integral(integrand);
}

double dual_volume(const Polytope& P, int j) {
    if (P.dim != 2) throw std::invalid_argument("dual_volume: 2D polytopes only");
    const int d = 2;
    if (j < 1 || j > d) throw std::invalid_argument("dual_volume: need 1 <= j <= d");
    if (j == d) return polytope_volume(P);
    if (!convex_contains(P.verts2, {0.0, 0.0}, 0.0))
        throw std::invalid_argument("dual_volume: o must lie in the interior of P");
    const auto g = [&](Vec2 x) { return 1.0 / norm(x); };  // j = 1, d = 2
    const double integral = polygon_cone_integral(P.verts2, g, 32, 32);
    return binomial(d - 1, j - 1) / ball_volume(d - j) * integral;
}

McResult dual_volume_section_oracle(const Polytope& P, Rng& rng, int sections) {
    if (P.dim != 2) throw std::invalid_argument("dual_volume_section_oracle: 2D polytopes only");
    if (!convex_contains(P.verts2, {0.0, 0.0}, 0.0))
        throw std::invalid_argument("dual_volume_section_oracle: o must lie in the interior of P");
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < sections; ++i) {
        const Vec2 u = dir(rng.uniform(0.0, 3.14159265358979323846));
        const double chord = convex_ray_exit(P.verts2, {0, 0}, u) + convex_ray_exit(P.verts2, {0, 0}, -u);
        sum += chord;
        sum2 += chord * chord;
    }
    const double mean = sum / sections;
    const double var = std::max(0.0, sum2 / sections - mean * mean) / std::max(1, sections - 1);
    McResult out;
    out.value = ball_binomial(2, 1) * mean;
    out.std_error = ball_binomial(2, 1) * std::sqrt(var);
    out.samples = sections;
    return out;
}

}  // namespace polylab
