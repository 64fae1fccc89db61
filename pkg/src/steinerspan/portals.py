"""Portal placement along triangulation edges.

Portals on an edge of length ``L`` sit at both endpoints, the midpoint, and
two mirrored geometric sequences ``d_1 = (eps_p**2 / 2) * L``,
``d_{i+1} = d_i * (1 + 2 * eps_p)`` measured from each endpoint. Any chord of
a circle through the edge endpoints that crosses the edge then passes within
``eps_p * |chord|`` of some portal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import GeometryError, Segment, dist, make_segment, orient2d, point_segment_distance


class ParameterError(ValueError):
    """A numeric parameter is outside its admissible range."""


@dataclass(frozen=True)
class PortalSet:
    edge: Segment
    eps_p: float
    offsets: tuple[float, ...]

    @property
    def length(self) -> float:
        return self.edge.length

    @property
    def params(self) -> np.ndarray:
        """Offsets as fractions of the edge length, exactly 0, 0.5 and 1 at the ends."""
        t = np.asarray(self.offsets) / self.length
        t[0], t[-1] = 0.0, 1.0
        t[len(t) // 2] = 0.5
        return t

    def points(self) -> np.ndarray:
        """Portal coordinates (k, 2); endpoints are reproduced bit-for-bit."""
        a = np.asarray(self.edge.a, dtype=float)
        b = np.asarray(self.edge.b, dtype=float)
        t = self.params[:, None]
        pts = a + t * (b - a)
        pts[0], pts[-1] = a, b
        return pts

    def __len__(self) -> int:
        return len(self.offsets)


def half_sequence(length: float, eps_p: float) -> list[float]:
    """Offsets from one endpoint, strictly below ``length / 2``."""
    out = []
    d = 0.5 * eps_p * eps_p * length
    grow = 1.0 + 2.0 * eps_p
    while d < 0.5 * length:
        out.append(d)
        d *= grow
    return out


def portal_count_bound(eps_p: float) -> int:
    return 3 + 2 * math.ceil(math.log(1.0 / eps_p**2) / math.log(1.0 + 2.0 * eps_p))


def place_portals(edge, eps_p: float) -> PortalSet:
    if not 0.0 < eps_p < 0.5:
        raise ParameterError(f"eps_p must lie in (0, 1/2), got {eps_p}")
    if not isinstance(edge, Segment):
        edge = make_segment(*edge)
    L = edge.length
    if not L > 0:
        raise GeometryError("portal edge has zero length")
    half = half_sequence(L, eps_p)
    offsets = [0.0, *half, 0.5 * L, *(L - d for d in reversed(half)), L]
    return PortalSet(edge, eps_p, tuple(offsets))


def _crosses(a, b, e, f) -> bool:
    """Closed segments ab and ef share a point, with ef not collinear to ab."""
    o1, o2 = orient2d(a, b, e), orient2d(a, b, f)
    o3, o4 = orient2d(e, f, a), orient2d(e, f, b)
    if o1 == 0 and o2 == 0:
        return False
    return o1 * o2 <= 0 and o3 * o4 <= 0


def chord_portal_distance(portals: PortalSet, circle, chord) -> float:
    """Distance from chord ``chord`` to the nearest portal.

    ``portals.edge`` must be a chord of ``circle`` and ``chord`` must cross it.
    """
    a, b = portals.edge
    center, r = circle
    tol = 1e-9 * max(r, portals.length)
    if abs(dist(center, a) - r) > tol or abs(dist(center, b) - r) > tol:
        raise GeometryError("portal edge is not a chord of the circle")
    e, f = chord
    if not _crosses(a, b, e, f):
        raise GeometryError("chord does not cross the portal edge")
    return min(point_segment_distance(p, e, f) for p in portals.points())


def chord_portal_distances(portals: PortalSet, E: np.ndarray, F: np.ndarray,
                           chunk: int = 4096) -> np.ndarray:
    """Vectorized nearest-portal distance for many chords ``E[i]F[i]``.

    Preconditions are the caller's responsibility.
    """
    P = portals.points()
    E = np.asarray(E, dtype=float)
    F = np.asarray(F, dtype=float)
    out = np.empty(len(E))
    for s in range(0, len(E), chunk):
        e, f = E[s:s + chunk, None, :], F[s:s + chunk, None, :]
        d = f - e
        w = P[None, :, :] - e
        t = np.clip((w * d).sum(-1) / (d * d).sum(-1), 0.0, 1.0)
        diff = w - t[..., None] * d
        out[s:s + chunk] = np.sqrt((diff * diff).sum(-1)).min(axis=1)
    return out


def chord_crossing_bound(A, B, C, D, E, F) -> tuple[float, float]:
    """Distance from chord EF to the nearer of B, C, and the bound
    ``|EF| |BC| / (2 min(|AB|, |CD|))`` for B, C inside chord AD."""
    actual = min(point_segment_distance(B, E, F), point_segment_distance(C, E, F))
    bound = dist(E, F) * dist(B, C) / (2.0 * min(dist(A, B), dist(C, D)))
    return actual, bound
