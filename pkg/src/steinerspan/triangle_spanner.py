"""Plane Steiner spanner for points on the boundary of one convex polygon.

Wedge systems are built for every direction ``2 * delta * i`` and overlaid
together with the polygon boundary subdivided at the input points; the
arrangement of that overlay is the spanner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .arrangement import PlanarGraph, arrangement
from .portals import ParameterError
from .wedges import BoundaryPoint, ConvexPolygon, build_wedges


def snap_delta(delta: float) -> float:
    """Largest half-angle <= ``delta`` for which pi / delta is an integer.

    Directions ``2 * delta * i`` then close up exactly around the circle, so
    the ray at ``(2i + 1) * delta`` is shared by systems ``i`` and ``i + 1``.
    """
    return math.pi / math.ceil(math.pi / delta - 1e-9)


def theory_delta(eps: float) -> float:
    """Half-angle for a (1 + eps) in-triangle stretch: (1/4) sqrt(eps / 2)."""
    return 0.25 * math.sqrt(eps / 2.0)


def direction_count(delta: float) -> int:
    return int(round(math.pi / delta))


@dataclass(frozen=True)
class Overlay:
    """Deduplicated wedge segments of all directions, keyed by origin and ray angle."""

    segments: np.ndarray  # (m, 2, 2)
    origins: np.ndarray  # index into the boundary point list
    ray_index: np.ndarray  # ray angle = ray_index * delta


def overlay_wedges(K: ConvexPolygon, P, delta: float) -> Overlay:
    D = direction_count(delta)
    best: dict[tuple[int, int], tuple[float, tuple]] = {}
    for i in range(D):
        system = build_wedges(K, P, 2.0 * delta * i, delta)
        for sg in system.segments:
            j = (2 * i + sg.side) % (2 * D)
            key = (sg.origin, j)
            L = sg.length
            # collinear rays from the same origin: keep the longer one
            if key not in best or L > best[key][0]:
                best[key] = (L, (sg.a, sg.b))
    keys = sorted(best)
    if not keys:
        return Overlay(np.zeros((0, 2, 2)), np.zeros(0, np.int64), np.zeros(0, np.int64))
    segs = np.array([best[k][1] for k in keys], dtype=float)
    return Overlay(segs, np.array([k[0] for k in keys]), np.array([k[1] for k in keys]))


def boundary_segments(K: ConvexPolygon, P) -> np.ndarray:
    """Boundary of K subdivided at the corners and at every point of P."""
    n = len(K)
    stops = {(i, 0.0): K.vertices[i] for i in range(n)}
    for bp in P:
        stops[(bp.edge, bp.t)] = bp.point
    keys = sorted(stops)
    pts = [stops[k] for k in keys]
    return np.array([[pts[i], pts[(i + 1) % len(pts)]] for i in range(len(pts))], dtype=float)


def default_eta(K: ConvexPolygon) -> float:
    v = np.asarray(K.vertices)
    return 1e-9 * float(np.hypot(*(v.max(0) - v.min(0))))


@dataclass(eq=False)
class TriangleArrangement:
    graph: PlanarGraph
    n_boundary: int  # the first n_boundary input segments were boundary pieces
    edge_source: np.ndarray
    point_vertex: np.ndarray  # vertex id of each input point
    n_wedge_segments: int


def triangle_arrangement(K: ConvexPolygon, P, delta: float, eta: float | None = None) -> TriangleArrangement:
    P = list(P)
    if eta is None:
        eta = default_eta(K)
    bnd = boundary_segments(K, P)
    ov = overlay_wedges(K, P, delta)
    segs = np.concatenate([bnd, ov.segments]) if len(ov.segments) else bnd
    arr = arrangement(segs, eta)
    g = arr.graph
    if P:
        _, idx = cKDTree(g.vertices).query(np.array([bp.point for bp in P], dtype=float))
    else:
        idx = np.zeros(0, np.int64)
    return TriangleArrangement(g, len(bnd), arr.edge_source, np.asarray(idx), len(ov.segments))


def build_triangle_spanner(K: ConvexPolygon, P, eps: float, delta: float | None = None,
                           eta: float | None = None) -> PlanarGraph:
    """Plane Steiner (1 + eps)-spanner for boundary points ``P`` inside ``K``.

    ``delta`` defaults to ``(1/4) sqrt(eps / 2)``; either way it is snapped
    down so that pi / delta is an integer.
    """
    if not 0.0 < eps < 1.0:
        raise ParameterError(f"eps must lie in (0, 1), got {eps}")
    P = [bp if isinstance(bp, BoundaryPoint) else BoundaryPoint.on(K, *bp) for bp in P]
    if not P:
        raise ParameterError("need at least one boundary point")
    delta = snap_delta(theory_delta(eps) if delta is None else delta)
    return triangle_arrangement(K, P, delta, eta).graph
