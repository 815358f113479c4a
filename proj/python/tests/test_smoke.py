import math

import _polylab as pl


def test_body_basics():
    disc = pl.Body("disc:1")
    assert disc.dimension == 2
    assert abs(disc.perimeter() - 2 * math.pi) < 1e-9
    assert abs(disc.area() - math.pi) < 1e-9
    x, y = disc.boundary_point(0.0)
    assert abs(x - 1.0) < 1e-12 and abs(y) < 1e-12
    assert abs(pl.Body("ellipse:2:1").curvature(0.0) - 2.0) < 1e-10


def test_hull_and_weights():
    ring, area, degenerate = pl.convex_hull([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)])
    assert not degenerate
    assert len(ring) == 4
    assert abs(area - 1.0) < 1e-12

    disc = pl.Body("disc:1")
    w = pl.Weight("uniform", disc)
    assert abs(w.normalization - math.pi) < 1e-5
    tri = [(0, 0), (0.5, 0), (0, 0.5)]
    assert abs(w.weighted_volume(tri) - 0.125 / math.pi) < 1e-6

    pts = w.sample(seed=7, count=500)
    assert all(x * x + y * y <= 1.0 for x, y in pts)
    assert pts == w.sample(seed=7, count=500)  # determinism


def test_projections_round_trip():
    p = pl.gnomonic_sphere_inv((0.3, -0.2))
    assert abs(sum(c * c for c in p) - 1.0) < 1e-12
    x, y = pl.gnomonic_sphere(*p)
    assert abs(x - 0.3) < 1e-12 and abs(y + 0.2) < 1e-12

    h = pl.gnomonic_hyper_inv((0.5, 0.1))
    assert abs(h[0] ** 2 + h[1] ** 2 - h[2] ** 2 + 1.0) < 1e-12
    x, y = pl.gnomonic_hyper(*h)
    assert abs(x - 0.5) < 1e-12 and abs(y - 0.1) < 1e-12


def test_hilbert_and_constants():
    C = pl.HilbertDomain("disc:1")
    r = 0.6
    assert abs(C.distance((0, 0), (r, 0)) - math.atanh(r)) < 1e-10
    assert abs(C.busemann_density((r, 0)) - (1 - r * r) ** -1.5) < 1e-4

    assert abs(pl.ball_volume(2) - math.pi) < 1e-12
    assert abs(pl.ball_binomial(2, 1) - math.pi / 2) < 1e-12
    assert abs(pl.limit_constant_c(2, 2) - pl.limit_constant_c_tilde(2, 2)) < 1e-15


def test_stats_and_experiment():
    w1 = pl.wasserstein1_to_normal([-1.0, 1.0])
    assert abs(w1 - 0.5353773) < 1e-5

    out = pl.run_experiment("euclidean", "disc:1", [64, 128, 256], 40, seed=3)
    assert -1.0 < out["deficit_slope"] < -0.4
    assert out["records_csv"].splitlines()[0].startswith("geometry,body")
    # Same seed, more workers: byte-identical records.
    again = pl.run_experiment("euclidean", "disc:1", [64, 128, 256], 40, seed=3, workers=2)
    assert again["records_csv"] == out["records_csv"]

    assert pl.wet_part_volume("disc:1", "uniform", 1e-3) > 0.0
