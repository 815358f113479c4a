#pragma once

#include <array>
#include <span>
#include <vector>

#include "polylab/geometry.hpp"

namespace polylab {

// Convex hull output. 2D: counterclockwise vertex ring; 3D: triangular facet
// list with outward orientation. `provenance` maps each hull vertex back to
// its index in the generating sample so difference operators can tell whether
// a sample point is a vertex without recomputing anything.
struct Polytope {
    int dim = 2;
    bool degenerate = false;  // affinely dependent input; volume() is 0
    std::vector<Vec2> verts2;
    std::vector<int> provenance;
    std::vector<Vec3> verts3;
    std::vector<std::array<int, 3>> facets;  // indices into verts3

    size_t vertex_count() const { return dim == 2 ? verts2.size() : verts3.size(); }
};

struct Simplex2 {
    Vec2 a, b, c;
    double area() const { return 0.5 * cross(b - a, c - a); }
};

struct FanDecomposition {
    std::vector<Simplex2> simplices;
    int dropped = 0;  // degenerate slivers below 1e-15 * Vol(P)
};

// Monotone chain; collinear runs are collapsed with tolerance 1e-12 (relative
// orientation filter in orient2d). Degenerate inputs yield degenerate=true.
Polytope convex_hull2(std::span<const Vec2> pts);

// Randomized-order incremental insertion. Facets oriented outward.
Polytope convex_hull3(std::span<const Vec3> pts);

double polytope_volume(const Polytope& p);

struct HalfSpace;
// P ∩ H− for 2D polytopes; empty result is a valid polytope with no vertices.
Polytope clip_halfspace(const Polytope& p, const HalfSpace& h);

// Apex must lie in the closure of P; simplices partition P up to measure zero.
FanDecomposition fan_decomposition(const Polytope& p, Vec2 apex);

// Vertex ring of the hull of ring ∪ {p}; returns false (ring untouched) when p
// is inside, so callers can detect zero difference-operator cases exactly.
bool insert_into_ring(std::vector<Vec2>& ring, Vec2 p);

// Euler characteristic data for 3D hulls (V - E + F).
int euler_characteristic(const Polytope& p);

}  // namespace polylab
