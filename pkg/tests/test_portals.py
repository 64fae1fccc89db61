from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from steinerspan.geometry import Circle, GeometryError, Point
from steinerspan.portals import (
    ParameterError,
    chord_crossing_bound,
    chord_portal_distance,
    chord_portal_distances,
    place_portals,
    portal_count_bound,
)

eps_ps = st.floats(0.01, 0.49)


def circle_through_unit_edge(h):
    """Circle through (0, 0) and (1, 0) with center (0.5, h)."""
    return Circle(Point(0.5, h), math.hypot(0.5, h))


def test_offsets_contain_ends_and_midpoint():
    ps = place_portals(((0, 0), (3, 4)), 0.2)
    assert ps.offsets[0] == 0.0 and ps.offsets[-1] == 5.0
    assert 2.5 in ps.offsets
    pts = ps.points()
    assert tuple(pts[0]) == (0, 0) and tuple(pts[-1]) == (3, 4)


def test_unit_edge_eps_01():
    ps = place_portals(((0, 0), (1, 0)), 0.1)
    assert ps.offsets[1] == pytest.approx(0.005)
    assert ps.offsets[2] == pytest.approx(0.006)
    assert len(ps) == 55
    assert len(ps) <= portal_count_bound(0.1)


@given(eps_ps, st.floats(0.1, 100.0))
def test_growth_symmetry_and_count(eps_p, L):
    ps = place_portals(((0, 0), (L, 0)), eps_p)
    off = np.array(ps.offsets)
    assert np.all(np.diff(off) > 0)
    assert np.allclose(off + off[::-1], L, rtol=0, atol=1e-12 * L)
    half = off[1:len(off) // 2]
    assert half[0] == pytest.approx(eps_p**2 * L / 2)
    assert np.allclose(half[1:] / half[:-1], 1 + 2 * eps_p)
    assert len(ps) <= portal_count_bound(eps_p)


@given(eps_ps, eps_ps)
def test_count_monotone(a, b):
    lo, hi = min(a, b), max(a, b)
    e = ((0, 0), (1, 0))
    assert len(place_portals(e, hi)) <= len(place_portals(e, lo))


@given(eps_ps, st.tuples(st.floats(-5, 5), st.floats(-5, 5)), st.tuples(st.floats(-5, 5), st.floats(-5, 5)))
def test_reversal_invariant(eps_p, a, b):
    if math.dist(a, b) < 1e-3:
        return
    p = place_portals((a, b), eps_p).points()
    q = place_portals((b, a), eps_p).points()
    assert np.allclose(p, q[::-1], atol=1e-12 * (1 + np.abs(p).max()))


def test_bad_eps():
    for e in (0.0, 0.5, -1, 0.7):
        with pytest.raises(ParameterError):
            place_portals(((0, 0), (1, 0)), e)


def test_chord_through_portal_is_zero():
    ps = place_portals(((0, 0), (1, 0)), 0.2)
    O = circle_through_unit_edge(0.3)
    # vertical chord through the midpoint
    r = O.radius
    dy = math.sqrt(r * r - 0.0)
    chord = ((0.5, 0.3 + dy), (0.5, 0.3 - dy))
    assert chord_portal_distance(ps, O, chord) == pytest.approx(0.0, abs=1e-15)
    x = ps.offsets[3]
    dy = math.sqrt(r * r - (x - 0.5) ** 2)
    chord = ((x, 0.3 + dy), (x, 0.3 - dy))
    assert chord_portal_distance(ps, O, chord) == pytest.approx(0.0, abs=1e-15)


def test_chord_preconditions():
    ps = place_portals(((0, 0), (1, 0)), 0.2)
    with pytest.raises(GeometryError):
        chord_portal_distance(ps, Circle(Point(0, 0), 1.0), ((0, 1), (0, -1)))
    O = circle_through_unit_edge(0.0)
    with pytest.raises(GeometryError):
        chord_portal_distance(ps, O, ((0, 0.5), (1, 0.5)))


def sample_crossing_chords(h, rng, m):
    """Chords of the circle through (0,0), (1,0) with center (0.5, h[i]) crossing that edge."""
    r = np.hypot(0.5, h)
    # angles of the edge endpoints seen from the center
    a0 = np.arctan2(-h, -0.5)
    a1 = np.arctan2(-h, 0.5)
    # the minor/major arcs split at a0, a1; E on one, F on the other
    span = (a1 - a0) % (2 * np.pi)
    u, v = rng.random(m), rng.random(m)
    te = a0 + u * span
    tf = a1 + v * (2 * np.pi - span)
    c = np.stack([np.full(m, 0.5), h], axis=1)
    E = c + r[:, None] * np.stack([np.cos(te), np.sin(te)], axis=1)
    F = c + r[:, None] * np.stack([np.cos(tf), np.sin(tf)], axis=1)
    return E, F


@pytest.mark.parametrize("eps_p", [0.05, 0.1, 0.2])
def test_chord_monte_carlo_small(eps_p):
    rng = np.random.default_rng(1)
    m = 5000
    h = np.tan(rng.uniform(-1.5, 1.5, m))
    E, F = sample_crossing_chords(h, rng, m)
    ps = place_portals(((0, 0), (1, 0)), eps_p)
    d = chord_portal_distances(ps, E, F)
    assert np.all(d <= eps_p * np.hypot(*(F - E).T))


def test_vector_matches_scalar():
    rng = np.random.default_rng(5)
    h = rng.normal(size=20)
    E, F = sample_crossing_chords(h, rng, 20)
    ps = place_portals(((0, 0), (1, 0)), 0.15)
    d = chord_portal_distances(ps, E, F)
    for i in range(20):
        O = circle_through_unit_edge(h[i])
        assert d[i] == pytest.approx(chord_portal_distance(ps, O, (E[i], F[i])), abs=1e-12)


def test_crossing_bound_between_consecutive_portals():
    rng = np.random.default_rng(2)
    ps = place_portals(((0, 0), (1, 0)), 0.1)
    pts = ps.points()
    off = np.array(ps.params)
    h = rng.normal(size=2000)
    E, F = sample_crossing_chords(h, rng, 2000)
    A, D = pts[0], pts[-1]
    for e, f in zip(E, F):
        # where the chord crosses the edge
        x = e[0] + (f[0] - e[0]) * (-e[1]) / (f[1] - e[1])
        k = int(np.clip(np.searchsorted(off, x) - 1, 0, len(off) - 2))
        B, C = pts[k], pts[k + 1]
        if k == 0 or k + 1 == len(off) - 1:
            continue  # the bound needs B, C strictly inside AD
        actual, bound = chord_crossing_bound(A, B, C, D, e, f)
        assert actual <= bound * (1 + 1e-9)
