#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polylab/body.hpp"
#include "polylab/hull.hpp"
#include "polylab/noneuclid.hpp"
#include "polylab/quadrature.hpp"
#include "polylab/rng.hpp"

namespace polylab {

// Signed cone integral over the triangle (o, a, b):
//   ∫ g = 2 * area(o,a,b) * ∫_0^1 ∫_0^1 s * g(s * ((1-tau) a + tau b)) dtau ds,
// the s-density 2s coming from the uniform-cone decomposition in d = 2. Signed
// areas make the edge sum over any polygon exact about o, whether or not o
// lies inside.
template <typename F>
double cone_integral(Vec2 a, Vec2 b, const F& g, const GaussRule& s_rule, const GaussRule& tau_rule) {
    const double signed2 = cross(a, b);  // = 2 * signed area
    if (signed2 == 0.0) return 0.0;
    double outer = 0.0;
    for (size_t i = 0; i < s_rule.nodes.size(); ++i) {
        const double s = 0.5 * (s_rule.nodes[i] + 1.0);
        double inner = 0.0;
        for (size_t j = 0; j < tau_rule.nodes.size(); ++j) {
            const double tau = 0.5 * (tau_rule.nodes[j] + 1.0);
            const Vec2 y = a + (b - a) * tau;
            inner += tau_rule.weights[j] * g(y * s);
        }
        outer += s_rule.weights[i] * s * (0.5 * inner);
    }
    return signed2 * 0.5 * outer;
}

template <typename F>
double polygon_cone_integral(std::span<const Vec2> poly, const F& g, int s_order, int tau_order) {
    const GaussRule& sr = gauss_legendre(s_order);
    const GaussRule& tr = gauss_legendre(tau_order);
    const size_t n = poly.size();
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) total += cone_integral(poly[i], poly[(i + 1) % n], g, sr, tr);
    return total;
}

struct McResult {
    double value = 0.0;
    double std_error = 0.0;
    long samples = 0;
};

struct HilbertGridParams {
    int n_alpha = 256;
    int n_s = 192;
};

// The weight-function class W(K): strictly positive probability densities on
// K, continuous and bounded near the boundary. Immutable after construction;
// all sampling state is the caller's Rng.
class WeightFunction {
public:
    enum class Kind { Uniform, Spherical, Hyperbolic, HilbertBusemann, HilbertHolmesThompson, DualPower };

    static WeightFunction uniform(std::shared_ptr<const SmoothBody> K);
    static WeightFunction spherical(std::shared_ptr<const SmoothBody> K);
    static WeightFunction hyperbolic(std::shared_ptr<const SmoothBody> K);
    static WeightFunction dual_power(std::shared_ptr<const SmoothBody> K, int j);
    static WeightFunction hilbert(std::shared_ptr<const SmoothBody> K, std::shared_ptr<const HilbertDomain> C,
                                  bool holmes_thompson, HilbertGridParams grid = HilbertGridParams());

    // Parses "uniform", "spherical", "hyperbolic", "dual:<j>",
    // "hilbert-bu:<C-id>", "hilbert-ht:<C-id>".
    static WeightFunction parse(const std::string& id, std::shared_ptr<const SmoothBody> K);

    Kind kind() const { return kind_; }
    const std::string& id() const { return id_; }
    const SmoothBody& domain() const { return *K_; }
    std::shared_ptr<const SmoothBody> domain_ptr() const { return K_; }
    bool radial() const { return kind_ != Kind::HilbertBusemann && kind_ != Kind::HilbertHolmesThompson; }
    int dual_j() const { return dual_j_; }

    double normalization() const { return Z_; }
    // Normalized density; throws when x is outside K. Returns +inf at the
    // origin for the dual power kind.
    double density(Vec2 x) const;
    // Unnormalized value, no membership check (quadrature hot path).
    double raw_density(Vec2 x) const;
    double raw_density3(Vec3 x) const;

    // Conditions a)-c) audit data: the reported lower/upper bounds of the
    // normalized density over the proxy (upper bound taken off the interior
    // core for the dual power kind).
    double reported_lower_bound() const { return c_lower_; }
    double reported_upper_bound() const { return c_upper_; }
    double sampling_upper_bound_raw() const { return raw_ub_; }

    // Rejection sampling from the bounding box. Throws after max_proposals
    // with the observed acceptance rate in the message.
    Vec2 sample(Rng& rng, long max_proposals = 1000000) const;
    Vec3 sample3(Rng& rng, long max_proposals = 1000000) const;
    // Fraction of box proposals accepted, measured over `proposals` draws.
    double rejection_acceptance_rate(Rng& rng, long proposals) const;

    // Normalized weighted volume Psi(P) = ∫_P psi dx / Z. 2D polytopes use the
    // signed edge-cone Gauss rule about the origin; 3D uses the exact ratio
    // for the uniform weight and per-simplex Monte Carlo otherwise.
    double weighted_volume(const Polytope& P) const;
    double weighted_volume(std::span<const Vec2> poly) const;
    // Unnormalized integral of the raw density over a polygon.
    double raw_integral(std::span<const Vec2> poly) const;

    // Monte Carlo cross-check path (uniform sampling on a fan about the
    // centroid); also the production path for non-uniform 3D weights.
    McResult mc_weighted_volume(const Polytope& P, Rng& rng, long total_samples) const;
    McResult mc_weighted_volume3(const Polytope& P, Rng& rng, long total_samples, double target_se) const;

    int cone_s_order() const { return s_order_; }
    int cone_tau_order() const { return tau_order_; }

    // Hilbert kinds only: max relative change of the interpolated density when
    // the precomputation grid is halved, probed on random interior points.
    double hilbert_grid_refinement_delta(int probes = 256) const;

private:
    WeightFunction() = default;
    void finalize();  // normalization + bounds audit
    double hilbert_interp(double alpha, double r) const;

    Kind kind_ = Kind::Uniform;
    std::string id_;
    std::shared_ptr<const SmoothBody> K_;
    std::shared_ptr<const HilbertDomain> C_;
    int dual_j_ = 1;
    double Z_ = 1.0;
    double raw_ub_ = 1.0;
    double c_lower_ = 0.0, c_upper_ = 0.0;
    int s_order_ = 32, tau_order_ = 32;

    // Hilbert interpolation grid over (alpha, s), s in [0,1] scaled by the
    // radial function of the proxy.
    HilbertGridParams grid_;
    std::vector<double> grid_values_;  // (n_alpha) x (n_s), row-major in alpha
    std::vector<double> grid_radial_;  // r_K(alpha_i)
};

// Weighted cap measure Phi(K ∩ H+(u, t)); clipping-based, in [0, 1].
double cap_measure(const SmoothBody& body, const WeightFunction& w, Vec2 u, double t);

}  // namespace polylab
