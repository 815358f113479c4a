#include "polylab/hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "polylab/body.hpp"

namespace polylab {

Polytope convex_hull2(std::span<const Vec2> pts) {
    Polytope out;
    out.dim = 2;
    const size_t n = pts.size();
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (pts[a].x != pts[b].x) return pts[a].x < pts[b].x;
        return pts[a].y < pts[b].y;
    });
    // Drop exact duplicates (probability zero for continuous samples, but the
    // ring invariant requires it).
    idx.erase(std::unique(idx.begin(), idx.end(),
                          [&](int a, int b) { return pts[a].x == pts[b].x && pts[a].y == pts[b].y; }),
              idx.end());
    const size_t m = idx.size();
    if (m < 3) {
        out.degenerate = true;
        for (int i : idx) {
            out.verts2.push_back(pts[i]);
            out.provenance.push_back(i);
        }
        return out;
    }
    std::vector<int> ring(2 * m);
    size_t k = 0;
    for (size_t i = 0; i < m; ++i) {  // lower chain
        while (k >= 2 && orient2d(pts[ring[k - 2]], pts[ring[k - 1]], pts[idx[i]]) <= 0.0) --k;
        ring[k++] = idx[i];
    }
    const size_t lower = k + 1;
    for (size_t i = m - 1; i-- > 0;) {  // upper chain
        while (k >= lower && orient2d(pts[ring[k - 2]], pts[ring[k - 1]], pts[idx[i]]) <= 0.0) --k;
        ring[k++] = idx[i];
    }
    ring.resize(k - 1);
    if (ring.size() < 3) {
        out.degenerate = true;
        for (int i : ring) {
            out.verts2.push_back(pts[i]);
            out.provenance.push_back(i);
        }
        return out;
    }
    out.verts2.reserve(ring.size());
    out.provenance = std::move(ring);
    for (int i : out.provenance) out.verts2.push_back(pts[i]);
    return out;
}

double polytope_volume(const Polytope& p) {
    if (p.degenerate) return 0.0;
    if (p.dim == 2) return polygon_area(p.verts2);
    // Signed tetrahedra from the centroid of the vertex set.
    Vec3 c{0, 0, 0};
    for (const Vec3& v : p.verts3) c = c + v;
    c = c * (1.0 / static_cast<double>(p.verts3.size()));
    double vol = 0.0;
    for (const auto& f : p.facets) {
        const Vec3 a = p.verts3[f[0]] - c;
        const Vec3 b = p.verts3[f[1]] - c;
        const Vec3 d = p.verts3[f[2]] - c;
        vol += dot(a, cross(b, d));
    }
    return vol / 6.0;
}

Polytope clip_halfspace(const Polytope& p, const HalfSpace& h) {
    if (p.dim != 2) throw std::invalid_argument("clip_halfspace: 2D polytopes only");
    Polytope out;
    out.dim = 2;
    out.verts2 = clip_polygon(p.verts2, h.normal, h.offset);
    out.degenerate = out.verts2.size() < 3;
    return out;
}

FanDecomposition fan_decomposition(const Polytope& p, Vec2 apex) {
    if (p.dim != 2) throw std::invalid_argument("fan_decomposition: 2D polytopes only");
    FanDecomposition fd;
    const auto& v = p.verts2;
    const size_t n = v.size();
    if (n < 3) return fd;
    const double vol = std::abs(polygon_area(v));
    for (size_t i = 0; i < n; ++i) {
        const Simplex2 s{apex, v[i], v[(i + 1) % n]};
        if (std::abs(s.area()) < 1e-15 * vol) {
            ++fd.dropped;
            continue;
        }
        fd.simplices.push_back(s);
    }
    return fd;
}

bool insert_into_ring(std::vector<Vec2>& ring, Vec2 p) {
    const size_t n = ring.size();
    if (n < 3) throw std::invalid_argument("insert_into_ring: need a nondegenerate ring");
    // Edges visible from p are those with p strictly on their outer side.
    std::vector<char> visible(n);
    bool any = false, all = true;
    for (size_t i = 0; i < n; ++i) {
        visible[i] = orient2d(ring[i], ring[(i + 1) % n], p) < 0.0;
        any |= visible[i];
        all &= static_cast<bool>(visible[i]);
    }
    if (!any) return false;  // p inside or on the boundary
    if (all) throw std::runtime_error("insert_into_ring: ring is not counterclockwise");
    // The visible edges form one contiguous cyclic run [s, e).
    size_t s = 0;
    while (!(visible[s] && !visible[(s + n - 1) % n])) ++s;
    std::vector<Vec2> next;
    next.reserve(n + 1);
    // Keep vertices from the end of the visible run around to its start.
    size_t e = s;
    while (visible[e]) e = (e + 1) % n;
    // e is now the first non-visible edge; vertices e..s survive, then p.
    for (size_t i = e;; i = (i + 1) % n) {
        next.push_back(ring[i]);
        if (i == s) break;
    }
    next.push_back(p);
    ring = std::move(next);
    return true;
}

// ----- 3D incremental hull -----

namespace {

struct Facet3 {
    int a, b, c;
    bool alive = true;
};

double orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Vec3 ab = b - a, ac = c - a, ad = d - a;
    const double det = dot(ad, cross(ab, ac));
    const double mag = std::abs(ab.x * ac.y * ad.z) + std::abs(ab.y * ac.z * ad.x) + std::abs(ab.z * ac.x * ad.y)
                     + std::abs(ab.z * ac.y * ad.x) + std::abs(ab.x * ac.z * ad.y) + std::abs(ab.y * ac.x * ad.z);
    if (std::abs(det) > mag * 4e-15) return det;
    const auto ld = [](const Vec3& v) { return std::array<long double, 3>{v.x, v.y, v.z}; };
    const auto A = ld(ab), B = ld(ac), C = ld(ad);
    const long double r = C[0] * (A[1] * B[2] - A[2] * B[1]) - C[1] * (A[0] * B[2] - A[2] * B[0])
                        + C[2] * (A[0] * B[1] - A[1] * B[0]);
    return static_cast<double>(r);
}

}  // namespace

Polytope convex_hull3(std::span<const Vec3> pts) {
    Polytope out;
    out.dim = 3;
    const size_t n = pts.size();
    if (n < 4) {
        out.degenerate = true;
        out.verts3.assign(pts.begin(), pts.end());
        return out;
    }
    // Initial tetrahedron from the first affinely independent quadruple.
    size_t i1 = 1;
    while (i1 < n && norm(pts[i1] - pts[0]) < 1e-14) ++i1;
    size_t i2 = i1 + 1;
    while (i2 < n && norm(cross(pts[i1] - pts[0], pts[i2] - pts[0])) < 1e-14) ++i2;
    size_t i3 = i2 + 1;
    while (i3 < n && std::abs(orient3d(pts[0], pts[i1], pts[i2], pts[i3])) < 1e-14) ++i3;
    if (i3 >= n) {
        out.degenerate = true;
        return out;
    }
    std::vector<Facet3> facets;
    const auto add_facet = [&](int a, int b, int c) { facets.push_back({a, b, c, true}); };
    {
        int a = 0, b = static_cast<int>(i1), c = static_cast<int>(i2), d = static_cast<int>(i3);
        if (orient3d(pts[a], pts[b], pts[c], pts[d]) > 0.0) std::swap(b, c);
        // Now d is below facet (a,b,c); orient all four outward.
        add_facet(a, b, c);
        add_facet(a, c, d);
        add_facet(c, b, d);
        add_facet(b, a, d);
    }
    size_t dead = 0;
    for (size_t i = 0; i < n; ++i) {
        if (i == 0 || i == i1 || i == i2 || i == i3) continue;
        const Vec3 p = pts[i];
        // Collect visible facets.
        std::vector<size_t> vis;
        for (size_t f = 0; f < facets.size(); ++f) {
            if (!facets[f].alive) continue;
            if (orient3d(pts[facets[f].a], pts[facets[f].b], pts[facets[f].c], p) > 0.0) vis.push_back(f);
        }
        if (vis.empty()) continue;  // interior point
        // Horizon edges: directed edges of visible facets whose reverse is not
        // in another visible facet.
        std::set<std::pair<int, int>> vis_edges;
        for (size_t f : vis) {
            const Facet3& fc = facets[f];
            vis_edges.insert({fc.a, fc.b});
            vis_edges.insert({fc.b, fc.c});
            vis_edges.insert({fc.c, fc.a});
        }
        std::vector<std::pair<int, int>> horizon;
        for (const auto& e : vis_edges)
            if (!vis_edges.count({e.second, e.first})) horizon.push_back(e);
        for (size_t f : vis) facets[f].alive = false;
        dead += vis.size();
        for (const auto& e : horizon) add_facet(e.first, e.second, static_cast<int>(i));
        // Periodic compaction keeps the visibility scan linear in live facets.
        if (dead > 256 && 2 * dead > facets.size()) {
            std::vector<Facet3> live;
            live.reserve(facets.size() - dead);
            for (const auto& f : facets)
                if (f.alive) live.push_back(f);
            facets = std::move(live);
            dead = 0;
        }
    }
    // Compact vertices.
    std::map<int, int> remap;
    for (const auto& f : facets) {
        if (!f.alive) continue;
        for (int v : {f.a, f.b, f.c})
            if (!remap.count(v)) {
                remap[v] = static_cast<int>(out.verts3.size());
                out.verts3.push_back(pts[v]);
                out.provenance.push_back(v);
            }
    }
    for (const auto& f : facets)
        if (f.alive) out.facets.push_back({remap[f.a], remap[f.b], remap[f.c]});
    if (out.facets.size() < 4) out.degenerate = true;
    return out;
}

int euler_characteristic(const Polytope& p) {
    if (p.dim != 3) throw std::invalid_argument("euler_characteristic: 3D polytopes only");
    std::set<std::pair<int, int>> edges;
    for (const auto& f : p.facets) {
        const auto add = [&](int a, int b) { edges.insert({std::min(a, b), std::max(a, b)}); };
        add(f[0], f[1]);
        add(f[1], f[2]);
        add(f[2], f[0]);
    }
    return static_cast<int>(p.verts3.size()) - static_cast<int>(edges.size()) + static_cast<int>(p.facets.size());
}

}  // namespace polylab
