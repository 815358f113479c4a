#pragma once

#include <optional>
#include <vector>

#include "polylab/floating.hpp"
#include "polylab/hull.hpp"
#include "polylab/weights.hpp"

namespace polylab {

// Centered weighted-volume functional f(x_1..x_k) = Psi([x_1..x_k]) - E_n of
// the weighted random polytope. The difference operators never see E_n (it
// cancels), which diff tests assert.
struct Functional {
    std::shared_ptr<const SmoothBody> K;
    const WeightFunction* phi = nullptr;  // sampling weight
    const WeightFunction* psi = nullptr;  // measuring weight
    int n = 0;
    double expectation = 0.0;  // E_n, pilot estimate

    double value(std::span<const Vec2> pts) const;  // f
    double psi_of(std::span<const Vec2> pts) const;
};

// First/second order difference operators, by hull recomputation with the
// point removed. diff1 equals 0 exactly whenever x_i is not a hull vertex.
double diff1(const Functional& f, const std::vector<Vec2>& pts, int i);
double diff2(const Functional& f, const std::vector<Vec2>& pts, int i, int j);

struct MomentEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long replications = 0;
};

struct GammaMoments {
    MomentEstimate g3, g4;
};

struct GammaRecombination {
    MomentEstimate g1, g2;
    int tuples = 0;
};

// Optional importance restriction: points that can influence the difference
// operators are forced into the wet part K \ K^phi_delta (likelihood ratio
// Phi(wet)^#restricted). Contributions from samples whose active points sit
// inside the floating body vanish unless the floating body escapes the hull,
// so the restricted estimator is a (numerically indistinguishable) lower
// bound; it is what makes the rare-event moments estimable at desk scale.
struct WetRestriction {
    std::vector<Vec2> floating_polygon;
    double wet_mass = 1.0;  // Phi(K \ K_delta^phi)
};

std::optional<WetRestriction> make_wet_restriction(const FloatingBodySolver& solver, int n, double c_safe);

// gamma_3 = E|D_1 f|^3, gamma_4 = E|D_1 f|^4 by direct Monte Carlo.
GammaMoments gamma_moments(const Functional& f, int replications, uint64_t master_seed,
                           const WetRestriction* restriction = nullptr);

// Sampled-recombination surrogates for the gamma_1/gamma_2 suprema: maxima
// over `tuples` random recombination tuples of Monte Carlo inner expectations.
// Documented lower-bound surrogates of the true suprema.
GammaRecombination gamma_recombination_estimates(const Functional& f, int replications, int tuples,
                                                 uint64_t master_seed, const WetRestriction* restriction = nullptr);

// Exact W_1 distance between the empirical law of `samples` and N(0,1):
// piecewise-closed-form integral of |F_R - Phi| via t*Phi(t) + phi(t).
double wasserstein1_to_normal(std::vector<double> samples);

struct NormalitySummary {
    double ks = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double w1 = 0.0;
};

// One-sample KS against N(0,1) plus standard moment estimators; input samples
// are expected to be standardized upstream. Throws below 8 samples.
NormalitySummary normality_summary(std::span<const double> samples);

// Normal-approximation bound assembled with absolute constant c = 1:
//   (sqrt n / V) (sqrt(n^2 g1) + sqrt(n g2) + sqrt(n/V) g3 + sqrt(g4)).
double assembled_normal_bound(int n, double variance, double g1, double g2, double g3, double g4);

double normal_cdf(double t);
double normal_quantile(double p);

}  // namespace polylab
