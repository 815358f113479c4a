#pragma once

#include <memory>
#include <vector>

#include "polylab/body.hpp"
#include "polylab/weights.hpp"

namespace polylab {

// Halfspace-intersection approximation of the weighted floating body on a
// direction grid.
struct FloatingBodyPolygon {
    double delta = 0.0;
    int directions = 0;
    std::vector<Vec2> polygon;  // counterclockwise; empty when the body is empty
    bool empty() const { return polygon.size() < 3; }
    double area() const { return polygon_area(polygon); }
};

// Per-edge cone integrals of the raw density over the proxy polygon, shared by
// all directions of a solver: the cap measure in any direction decomposes into
// a prefix sum of these plus three partial cones (two cut edges, one chord).
struct EdgeConeTable {
    std::vector<double> cone;    // per edge (v_i, v_{i+1})
    std::vector<double> prefix;  // prefix[k] = sum of cone[0..k)
    double total = 0.0;
};

// Incremental evaluator of t -> Phi(K ∩ {x.u >= t}) for one direction.
// measure() is monotone nonincreasing with range [0,1] and costs three cone
// integrals per call; cut_height() bisects it to measure tolerance 1e-9.
class CapMeasureProfile {
public:
    CapMeasureProfile(const std::vector<Vec2>& proxy, const EdgeConeTable& cones, const WeightFunction& w, Vec2 u);

    double measure(double t) const;
    double cut_height(double delta) const;
    double max_offset() const { return dmax_; }
    double min_offset() const { return dmin_; }
    Vec2 direction() const { return u_; }

private:
    const std::vector<Vec2>& proxy_;
    const EdgeConeTable& cones_;
    const WeightFunction& w_;
    Vec2 u_;
    std::vector<double> d_;  // projections
    int m_ = 0, mn_ = 0;     // argmax / argmin vertex
    double dmax_ = 0.0, dmin_ = 0.0;
    int len_right_ = 0, len_left_ = 0;
};

// Floating bodies, minimal cap measures, wet parts and visibility regions for
// one (body, weight) pair. Profiles are built lazily per direction and reused
// across levels; not safe for concurrent use.
class FloatingBodySolver {
public:
    FloatingBodySolver(std::shared_ptr<const SmoothBody> K, WeightFunction w, int directions = 720);

    const SmoothBody& body() const { return *K_; }
    const WeightFunction& weight() const { return w_; }
    int directions() const { return static_cast<int>(dirs_.size()); }

    const CapMeasureProfile& profile(int i) const;

    // Offset t with Phi(cap(u, t)) = delta for an arbitrary direction.
    double cut_height(Vec2 u, double delta) const;

    FloatingBodyPolygon floating_body(double delta) const;

    // Minimal cap measure f_K^phi(x); direction-grid minimum plus a
    // golden-section polish between the best neighbors.
    double min_cap_measure(Vec2 x) const;

    // Vol(K) - Vol(K_delta^phi) in Lebesgue area.
    double wet_part_volume(double delta) const;

    // max_x f(x), estimated at the proxy centroid (reported, not asserted).
    double alpha_estimate() const;

    // Relative area change of the floating polygon when the direction grid is
    // doubled (refinement report).
    double refinement_delta(double delta) const;

private:
    double measure_along(Vec2 u, double t) const;

    std::shared_ptr<const SmoothBody> K_;
    WeightFunction w_;
    EdgeConeTable cones_;
    std::vector<Vec2> dirs_;
    mutable std::vector<std::unique_ptr<CapMeasureProfile>> profiles_;
};

// Visibility region Delta(z, delta) for the classical (uniform-weight)
// floating body: the two tangent lines from z to K_delta plus the collar
// between z and the near boundary of K_delta. Heights give the exact cap
// sandwich C(z, inner_height) ⊆ Delta ⊆ C(z, outer_height).
struct VisibilityRegion {
    double area = 0.0;
    double inner_height = 0.0;
    double outer_height = 0.0;
};

VisibilityRegion visibility_region(const SmoothBody& K, double theta_z, const FloatingBodyPolygon& kdelta);

// Membership test used by the cap-union cross-check: is y in Delta(z_point,·)
// for the given floating polygon (segment [z,y] misses it, y outside it)?
bool visible_from(const std::vector<Vec2>& kdelta, Vec2 z, Vec2 y);

// Ratio sequence Vol(C(z,t))/t^{(d+1)/2} over a t-grid plus the closed-form
// limit 2^{(d+1)/2} Vol(B^{d-1})/(d+1) * H(z)^{-1/2} for d = 2.
struct CapLimitCheck {
    std::vector<double> t;
    std::vector<double> ratio;
    double limit = 0.0;
};

CapLimitCheck cap_limit_check(const SmoothBody& K, double theta_z, const std::vector<double>& t_grid);

// Largest c in (0,1) with K_{delta/c} ⊆ K_delta^phi ⊆ K_{c delta} (bisected
// per side, vertex containment tests); 0 when no such c exists on the grid.
double sandwich_constant(const FloatingBodySolver& weighted, const FloatingBodySolver& classical, double delta);

// Empirical P(K^phi_{c ln n / n} not ⊆ K_phi(n)) for each c, estimated with
// common random hulls across the c grid (so rates are exactly monotone in c).
std::vector<double> vu_containment_failure_rates(const FloatingBodySolver& solver,
                                                 const std::vector<double>& cs, int n, int replications,
                                                 uint64_t master_seed);

}  // namespace polylab
