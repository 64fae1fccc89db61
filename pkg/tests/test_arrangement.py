from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.sparse.csgraph import dijkstra

from steinerspan.arrangement import candidate_pairs, planarize
from steinerspan.portals import ParameterError
from steinerspan.triangle_spanner import (
    build_triangle_spanner,
    snap_delta,
    theory_delta,
    triangle_arrangement,
)
from steinerspan.verify import check_plane, check_plane_bruteforce, proper_crossing_count
from steinerspan.wedges import BoundaryPoint, ConvexPolygon

EQUI = ConvexPolygon([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])


def test_x_shape():
    g = planarize([((0, -1), (0, 1)), ((-1, 0), (1, 0))])
    assert g.n_vertices == 5 and g.n_edges == 4


def test_disjoint():
    g = planarize([((0, 0), (1, 0)), ((0, 1), (1, 1))])
    assert g.n_vertices == 4 and g.n_edges == 2


def test_t_junction_and_overlap():
    g = planarize([((0, 0), (2, 0)), ((1, 0), (1, 1))])
    assert g.n_vertices == 4 and g.n_edges == 3
    g = planarize([((0, 0), (2, 0)), ((1, 0), (3, 0))])
    assert g.n_vertices == 4 and g.n_edges == 3
    assert g.total_length == pytest.approx(3.0)


@pytest.mark.parametrize("seed", range(10))
def test_counts_match_crossing_oracle(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 51))
    S = rng.random((m, 2, 2))
    g = planarize(S)
    k = proper_crossing_count(S)
    assert g.n_vertices == 2 * m + k
    assert g.n_edges == m + 2 * k
    assert check_plane_bruteforce(g).is_plane


@given(st.integers(0, 10_000), st.integers(1, 25))
def test_union_preserved(seed, m):
    S = np.random.default_rng(seed).random((m, 2, 2))
    g = planarize(S)
    assert g.total_length == pytest.approx(np.hypot(*(S[:, 1] - S[:, 0]).T).sum(), rel=1e-9)
    assert np.all(g.lengths > 0)
    assert len({tuple(e) for e in g.edges.tolist()}) == g.n_edges
    assert check_plane_bruteforce(g).is_plane


def test_snap_delta():
    assert snap_delta(math.pi / 8) == pytest.approx(math.pi / 8)
    d = snap_delta(0.3)
    assert d <= 0.3 and math.pi / d == pytest.approx(round(math.pi / d))
    assert theory_delta(0.5) == pytest.approx(0.125)


def dilation(g, idx, pts):
    D = dijkstra(g.csr(), directed=False, indices=idx)[:, idx]
    E = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
    np.fill_diagonal(E, 1.0)
    return (D / E).max()


def portal_vertices(g, pts):
    return np.array([int(np.argmin(np.hypot(*(g.vertices - p).T))) for p in pts])


def test_two_points():
    P = [BoundaryPoint.on(EQUI, 0, 0.3), BoundaryPoint.on(EQUI, 1, 0.6)]
    g = build_triangle_spanner(EQUI, P, 0.2)
    pts = np.array([bp.point for bp in P])
    assert dilation(g, portal_vertices(g, pts), pts) <= 1.2


def test_points_on_one_edge():
    P = [BoundaryPoint.on(EQUI, 0, t) for t in (0.1, 0.4, 0.7)]
    g = build_triangle_spanner(EQUI, P, 0.3)
    pts = np.array([bp.point for bp in P])
    assert dilation(g, portal_vertices(g, pts), pts) == pytest.approx(1.0, abs=1e-12)


def test_random_portals_equilateral():
    rng = np.random.default_rng(0)
    P = [BoundaryPoint.on(EQUI, int(rng.integers(3)), float(rng.random())) for _ in range(20)]
    g = build_triangle_spanner(EQUI, P, 0.2)
    pts = np.array([bp.point for bp in P])
    assert dilation(g, portal_vertices(g, pts), pts) <= 1.2
    assert check_plane(g).is_plane


def test_edges_inside_triangle():
    rng = np.random.default_rng(3)
    P = [BoundaryPoint.on(EQUI, int(rng.integers(3)), float(rng.random())) for _ in range(10)]
    ta = triangle_arrangement(EQUI, P, snap_delta(0.3))
    for p in ta.graph.vertices:
        assert EQUI.contains(p, tol=1e-9)
    assert np.allclose(ta.graph.vertices[ta.point_vertex], [bp.point for bp in P])


def test_bad_eps():
    with pytest.raises(ParameterError):
        build_triangle_spanner(EQUI, [BoundaryPoint.on(EQUI, 0, 0.5)], 1.0)


@given(st.integers(0, 10_000), st.integers(0, 60), st.integers(1, 40))
def test_candidate_pairs_match_all_pairs(seed, m, budget):
    rng = np.random.default_rng(seed)
    # a coarse grid makes touching boxes and equal coordinates common
    lo = np.round(rng.random((m, 2)) * 5) / 5
    hi = lo + np.round(rng.random((m, 2)) * 3) / 5 * (rng.random((m, 1)) < 0.8)
    if m:
        lo[0], hi[0] = np.inf, -np.inf  # a dropped segment
    I, J = candidate_pairs(lo, hi, budget=budget)
    want = [(i, j) for i in range(m) for j in range(i + 1, m)
            if lo[i, 0] <= hi[j, 0] and hi[i, 0] >= lo[j, 0] and lo[i, 1] <= hi[j, 1] and hi[i, 1] >= lo[j, 1]]
    assert list(zip(I.tolist(), J.tolist())) == want
