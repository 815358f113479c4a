#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polylab/stein.hpp"
#include "polylab/weights.hpp"

namespace polylab {

// One replicated experiment: sample n points from phi on K, hull them, and
// measure with psi, across an n-grid. The geometry field selects the reduction
// to the weighted Euclidean picture.
struct ExperimentConfig {
    std::string geometry = "euclidean";  // euclidean|spherical|hyperbolic|hilbert-bu|hilbert-ht|dual
    std::string body = "disc:1";
    std::string weight_phi;              // empty: derived from geometry
    std::string weight_psi;
    std::string hilbert_domain = "disc:1";
    int dual_j = 1;
    std::vector<int> n_grid{128, 256, 512, 1024, 2048, 4096, 8192};
    int replications = 400;
    uint64_t master_seed = 0;
    int workers = 0;  // 0: hardware concurrency
    int hilbert_grid_alpha = 256;
    int hilbert_grid_s = 192;
    int hilbert_direction_m = 1024;

    void validate() const;
    std::string geometry_id() const;  // seed stream label
};

struct GeometryBinding {
    std::shared_ptr<const SmoothBody> K;
    WeightFunction phi;
    WeightFunction psi;
    double dual_vj_of_K = 0.0;  // tilde V_j(K) when geometry == dual
};

GeometryBinding bind_geometry(const ExperimentConfig& cfg);

struct ReplicationRecord {
    int n = 0;
    int rep = 0;
    uint64_t seed = 0;
    double psi_value = 0.0;
    int hull_vertices = 0;
    double vj_value = 0.0;  // dual geometry only
};

struct PerNSummary {
    int n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double ks = 0.0, skewness = 0.0, excess_kurtosis = 0.0, w1 = 0.0;
    bool variance_positive = true;
};

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS residual in log space
};

// Ordinary least squares on (ln n, ln y); throws on nonpositive ys.
RateFit fit_rate(std::span<const double> ns, std::span<const double> ys);

struct ExperimentSummary {
    std::vector<PerNSummary> per_n;
    RateFit deficit;    // on 1 - mean
    RateFit variance;   // on var
    double limit_rhs = 0.0;        // boundary-integral prediction for n^{2/3}(1 - E Psi)
    double limit_empirical = 0.0;  // Richardson extrapolation of n^{2/3}(1 - mean)
    long discarded = 0;            // degenerate-hull replications (resampled)
};

struct ExperimentResult {
    ExperimentConfig config;
    std::string phi_id, psi_id;              // resolved weight identifiers
    std::vector<ReplicationRecord> records;  // (n, rep) order
    ExperimentSummary summary;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Limit constants of the expectation asymptotics (c(d,d) = c_tilde(d,d)).
double limit_constant_c(int d, int j);
double limit_constant_c_tilde(int d, int j);

// c(d,d) * \int_{bd K} phi^{-2/(d+1)} H^{1/(d+1)} psi dH^{d-1} for d = 2,
// the predicted limit of n^{2/3}(1 - E Psi(K_phi(n))).
double expectation_limit_rhs(const SmoothBody& K, const WeightFunction& phi, const WeightFunction& psi);

// j-th dual volume by the radial power integral (dual Kubota route).
double dual_volume(const Polytope& P, int j);

// Independent oracle for d=2, j=1: mean central chord length times the
// ball-binomial, with Monte Carlo standard error.
McResult dual_volume_section_oracle(const Polytope& P, Rng& rng, int sections);

}  // namespace polylab
