from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.sparse.csgraph import dijkstra

from steinerspan.arrangement import PlanarGraph
from steinerspan.generators import generate
from steinerspan.spanner import build_spanner
from steinerspan.triangulation import InputError
from steinerspan.verify import (
    DisconnectedError,
    SiteDistances,
    brute_force_tour,
    check_plane,
    check_plane_bruteforce,
    held_karp_euclidean,
    held_karp_metric,
    max_dilation,
    verify,
)


def test_straight_edge_ratio_one():
    g = PlanarGraph([(0, 0), (3, 4)], [(0, 1)])
    d = max_dilation(g, site_map=[0, 1])
    assert d.ratio == 1.0 and d.pair == (0, 1)


def test_square_boundary_sqrt2(unit_square):
    g = PlanarGraph(unit_square, [(0, 1), (1, 2), (2, 3), (3, 0)])
    d = max_dilation(g, site_map=range(4))
    assert d.ratio == pytest.approx(math.sqrt(2))
    assert d.pair in ((0, 2), (1, 3))
    assert d.graph_distance == pytest.approx(2.0)


def test_disconnected_names_site():
    g = PlanarGraph([(0, 0), (1, 0), (5, 5)], [(0, 1)])
    with pytest.raises(DisconnectedError) as e:
        max_dilation(g, site_map=[0, 1, 2])
    assert e.value.site == 2


def test_x_graph_not_plane():
    g = PlanarGraph([(0, -1), (0, 1), (-1, 0), (1, 0)], [(0, 1), (2, 3)])
    r = check_plane(g)
    assert not r.is_plane and r.witness == (0, 1)


def test_touching_cases():
    # T-junction: an edge ends in the interior of another
    g = PlanarGraph([(0, 0), (2, 0), (1, 0), (1, 1)], [(0, 1), (2, 3)])
    assert not check_plane(g)
    # collinear overlap through a shared endpoint
    g = PlanarGraph([(0, 0), (2, 0), (1, 0)], [(0, 1), (0, 2)])
    assert not check_plane(g)
    # a path is fine
    g = PlanarGraph([(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)])
    assert check_plane(g)


@given(st.integers(0, 10_000), st.integers(2, 30))
def test_check_plane_matches_bruteforce(seed, m):
    rng = np.random.default_rng(seed)
    # snap to a coarse grid so touching and collinear cases occur
    V = np.round(rng.random((m + 3, 2)) * 6) / 6
    E = rng.integers(0, len(V), size=(m, 2))
    E = E[E[:, 0] != E[:, 1]]
    E = np.unique(np.sort(E, axis=1), axis=0)
    keep = np.hypot(*(V[E[:, 0]] - V[E[:, 1]]).T) > 0
    g = PlanarGraph(V, E[keep])
    a, b = check_plane(g), check_plane_bruteforce(g)
    assert a.is_plane == b.is_plane
    assert a.witness == b.witness


def test_held_karp_small():
    assert held_karp_euclidean([(0, 0), (1, 0), (1, 1), (0, 1)]) == pytest.approx(4.0)
    assert held_karp_euclidean([(0, 0), (3, 0), (0, 4)]) == pytest.approx(12.0)
    with pytest.raises(ValueError):
        held_karp_euclidean([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        held_karp_euclidean(np.random.default_rng(0).random((16, 2)))


@pytest.mark.parametrize("seed", range(3))
def test_held_karp_matches_permutations(seed):
    P = np.random.default_rng(seed).random((8, 2))
    assert held_karp_euclidean(P) == pytest.approx(brute_force_tour(P), rel=1e-12)


def test_metric_with_complete_graph():
    P = np.random.default_rng(4).random((7, 2))
    E = [(i, j) for i in range(7) for j in range(i + 1, 7)]
    g = PlanarGraph(P, E)
    assert held_karp_metric(g, site_map=range(7)) == pytest.approx(held_karp_euclidean(P))


def test_metric_unit_square(unit_square):
    sp = build_spanner(unit_square, 0.1)
    t = held_karp_metric(sp)
    assert 4.0 - 1e-12 <= t <= 4.4


def test_site_distances_exact():
    P = generate("poisson-disk", 40, seed=6)
    sp = build_spanner(P, 0.5)
    full = dijkstra(sp.graph.csr(), directed=False, indices=sp.site_map)[:, sp.site_map]
    sd = SiteDistances(sp.graph, sp.site_map, near=4, reach=1.1)
    ratio, i, j = sd.max_ratio()
    E = sd.E.copy()
    np.fill_diagonal(E, np.inf)
    assert ratio == pytest.approx((full / E).max(), rel=1e-12)
    assert np.allclose(sd.D[sd.exact], full[sd.exact], rtol=1e-12)
    assert np.allclose(sd.all(), full, rtol=1e-12)


def test_sample_below_all():
    P = generate("poisson-disk", 40, seed=7)
    sp = build_spanner(P, 0.5)
    full = max_dilation(sp).ratio
    for seed in range(3):
        assert max_dilation(sp, "sample", k=50, seed=seed).ratio <= full + 1e-12


def test_report_roundtrip():
    P = generate("poisson-disk", 12, seed=1)
    sp = build_spanner(P, 0.5)
    rep = verify(sp.graph, sp.site_map, 0.5, coverage_samples=500)
    assert rep.passed
    assert rep.tsp is not None and 1.0 <= rep.tsp["ratio"] <= 1.5
    assert rep.to_json() == verify(sp.graph, sp.site_map, 0.5, coverage_samples=500).to_json()


def test_report_needs_a_triangulation():
    g = PlanarGraph([(0, 0), (1, 0)], [(0, 1)])
    with pytest.raises(InputError):
        verify(g, [0, 1], 0.1)
