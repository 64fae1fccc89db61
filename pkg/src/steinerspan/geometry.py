"""Planar primitives and robust predicates.

Topological decisions (``orient2d``, ``in_circumcircle``) are exact: a
floating-point evaluation is accepted when its magnitude clears a forward
error bound, otherwise the determinant is re-evaluated with rationals.
Constructions (circumcenters, intersection points) are plain floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

_EPS = np.finfo(float).eps / 2.0
# Shewchuk's first-stage error bounds.
_CCW_ERRBOUND = (3.0 + 16.0 * _EPS) * _EPS
_ICC_ERRBOUND = (10.0 + 96.0 * _EPS) * _EPS


class GeometryError(ValueError):
    """Raised for invalid geometric input."""


class DegenerateTriangleError(GeometryError):
    """Raised when three points that must span a triangle are collinear."""


class Point(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    a: Point
    b: Point

    @property
    def length(self) -> float:
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])


class Circle(NamedTuple):
    center: Point
    radius: float


def make_point(x, y) -> Point:
    x, y = float(x), float(y)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise GeometryError(f"non-finite coordinate ({x}, {y})")
    return Point(x, y)


def make_segment(a, b) -> Segment:
    a, b = Point(*map(float, a)), Point(*map(float, b))
    if a == b:
        raise GeometryError("segment endpoints coincide")
    return Segment(a, b)


def dist(p, q) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def orient2d(a, b, c) -> int:
    """Sign of the turn a -> b -> c: +1 left, -1 right, 0 collinear."""
    detleft = (a[0] - c[0]) * (b[1] - c[1])
    detright = (a[1] - c[1]) * (b[0] - c[0])
    det = detleft - detright
    bound = _CCW_ERRBOUND * (abs(detleft) + abs(detright))
    if det > bound or -det > bound:
        return 1 if det > 0 else -1
    return _orient2d_exact(a, b, c)


def _orient2d_exact(a, b, c) -> int:
    ax, ay = Fraction(a[0]), Fraction(a[1])
    bx, by = Fraction(b[0]), Fraction(b[1])
    cx, cy = Fraction(c[0]), Fraction(c[1])
    return _sign((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def _incircle_raw(a, b, c, d) -> int:
    """Sign of the incircle determinant, no orientation normalization."""
    adx, ady = a[0] - d[0], a[1] - d[1]
    bdx, bdy = b[0] - d[0], b[1] - d[1]
    cdx, cdy = c[0] - d[0], c[1] - d[1]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    bound = _ICC_ERRBOUND * permanent
    if det > bound or -det > bound:
        return 1 if det > 0 else -1
    return _incircle_exact(a, b, c, d)


def _incircle_exact(a, b, c, d) -> int:
    dx, dy = Fraction(d[0]), Fraction(d[1])
    rows = []
    for p in (a, b, c):
        px, py = Fraction(p[0]) - dx, Fraction(p[1]) - dy
        rows.append((px, py, px * px + py * py))
    (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = rows
    det = (a2 * (b0 * c1 - c0 * b1) + b2 * (c0 * a1 - a0 * c1)
           + c2 * (a0 * b1 - b0 * a1))
    return _sign(det)


def in_circumcircle(a, b, c, d) -> int:
    """+1 if d is strictly inside the circle through a, b, c; 0 on it; -1 outside.

    The orientation of (a, b, c) is normalized first, so the answer does not
    depend on vertex order.
    """
    o = orient2d(a, b, c)
    if o == 0:
        raise DegenerateTriangleError(f"collinear points {a}, {b}, {c}")
    return o * _incircle_raw(a, b, c, d)


def in_circumcircle_sos(a, b, c, d, ia: int, ib: int, ic: int, id_: int) -> int:
    """Incircle test with symbolic perturbation; never returns 0.

    ``a, b, c`` must be counterclockwise. Each point's lifted height is raised
    by an infinitesimal that is larger for lower site indices, so exactly
    cocircular configurations are resolved consistently: among the four
    points, the lowest-index one whose perturbation term is nonzero decides.
    Raising a point lifts it off the paraboloid, which pushes ``d`` outward
    or pulls the circle of ``a, b, c`` away from ``d``.
    """
    s = _incircle_raw(a, b, c, d)
    if s != 0:
        return s
    # Coefficients of each lifted height in the incircle determinant.
    terms = sorted([
        (ia, lambda: orient2d(b, c, d)),
        (ib, lambda: orient2d(c, a, d)),
        (ic, lambda: orient2d(a, b, d)),
        (id_, lambda: -orient2d(a, b, c)),
    ], key=lambda t: t[0])
    for _, coeff in terms:
        v = coeff()
        if v != 0:
            return v
    raise AssertionError("unreachable: a, b, c must not be collinear")


def circumcircle(a, b, c) -> Circle:
    """Circle through three non-collinear points."""
    if orient2d(a, b, c) == 0:
        raise DegenerateTriangleError(f"collinear points {a}, {b}, {c}")
    bx, by = b[0] - a[0], b[1] - a[1]
    cx, cy = c[0] - a[0], c[1] - a[1]
    d = 2.0 * (bx * cy - by * cx)
    b2, c2 = bx * bx + by * by, cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = Point(a[0] + ux, a[1] + uy)
    return Circle(center, math.hypot(ux, uy))


class Intersection(NamedTuple):
    """Result of :func:`segment_intersection`.

    ``kind`` is one of ``"none"``, ``"point"`` (proper or T-shaped contact),
    ``"shared-endpoint"`` or ``"overlap"``. ``point`` is set for the two point
    kinds, ``overlap`` holds the common subsegment.
    """

    kind: str
    point: Point | None = None
    overlap: Segment | None = None


def _on_closed_segment(p, q, r) -> bool:
    # r collinear with pq assumed
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def line_intersection_point(p1, p2, q1, q2) -> Point:
    """Intersection of the supporting lines of p1p2 and q1q2 (floating)."""
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = q2[0] - q1[0], q2[1] - q1[1]
    den = rx * sy - ry * sx
    t = ((q1[0] - p1[0]) * sy - (q1[1] - p1[1]) * sx) / den
    t = min(1.0, max(0.0, t))
    return Point(p1[0] + t * rx, p1[1] + t * ry)


def segment_intersection(s1, s2) -> Intersection:
    """Classify how two closed segments meet, using exact orientation signs."""
    p1, p2 = s1
    q1, q2 = s2
    o1 = orient2d(p1, p2, q1)
    o2 = orient2d(p1, p2, q2)
    o3 = orient2d(q1, q2, p1)
    o4 = orient2d(q1, q2, p2)

    if o1 == 0 and o2 == 0:
        # collinear: project onto the dominant axis of s1
        axis = 0 if abs(p2[0] - p1[0]) >= abs(p2[1] - p1[1]) else 1
        lo1, hi1 = sorted((p1, p2), key=lambda p: (p[axis], p[1 - axis]))
        lo2, hi2 = sorted((q1, q2), key=lambda p: (p[axis], p[1 - axis]))
        key = lambda p: (p[axis], p[1 - axis])
        lo = max(lo1, lo2, key=key)
        hi = min(hi1, hi2, key=key)
        if key(lo) > key(hi):
            return Intersection("none")
        if lo == hi:
            shared = {tuple(p1), tuple(p2)} & {tuple(q1), tuple(q2)}
            kind = "shared-endpoint" if shared else "point"
            return Intersection(kind, Point(*lo))
        return Intersection("overlap", overlap=Segment(Point(*lo), Point(*hi)))

    if o1 * o2 > 0 or o3 * o4 > 0:
        return Intersection("none")

    shared = {tuple(p1), tuple(p2)} & {tuple(q1), tuple(q2)}
    if shared:
        return Intersection("shared-endpoint", Point(*shared.pop()))
    # touching cases: an endpoint lies on the other segment
    if o1 == 0:
        return Intersection("point", Point(*q1))
    if o2 == 0:
        return Intersection("point", Point(*q2))
    if o3 == 0:
        return Intersection("point", Point(*p1))
    if o4 == 0:
        return Intersection("point", Point(*p2))
    return Intersection("point", line_intersection_point(p1, p2, q1, q2))


def point_segment_distance(p, a, b) -> float:
    ex, ey = b[0] - a[0], b[1] - a[1]
    L2 = ex * ex + ey * ey
    t = ((p[0] - a[0]) * ex + (p[1] - a[1]) * ey) / L2
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - a[0] - t * ex, p[1] - a[1] - t * ey)


def angle_at(a, b, c) -> float:
    """Interior angle at vertex a of triangle abc, via atan2(|cross|, dot)."""
    ux, uy = b[0] - a[0], b[1] - a[1]
    vx, vy = c[0] - a[0], c[1] - a[1]
    return math.atan2(abs(ux * vy - uy * vx), ux * vx + uy * vy)


# -- vectorized variants -----------------------------------------------------

def orient2d_many(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Row-wise orient2d for (N, 2) arrays; exact like the scalar version."""
    a, b, c = (np.asarray(v, dtype=float) for v in np.broadcast_arrays(a, b, c))
    detleft = (a[:, 0] - c[:, 0]) * (b[:, 1] - c[:, 1])
    detright = (a[:, 1] - c[:, 1]) * (b[:, 0] - c[:, 0])
    det = detleft - detright
    bound = _CCW_ERRBOUND * (np.abs(detleft) + np.abs(detright))
    out = np.sign(det).astype(np.int8)
    unsure = np.flatnonzero(np.abs(det) <= bound)
    for i in unsure:
        out[i] = _orient2d_exact(a[i], b[i], c[i])
    return out


def incircle_many(a, b, c, d) -> np.ndarray:
    """Incircle signs of points ``d`` against ccw triangles ``abc``.

    Arguments broadcast over leading axes, e.g. one triangle against (N, 2)
    points, or (M, 1, 2) triangles against (N, 2) points for an (M, N) result.
    """
    a, b, c, d = (np.asarray(v, dtype=float) for v in (a, b, c, d))
    adx, ady = a[..., 0] - d[..., 0], a[..., 1] - d[..., 1]
    bdx, bdy = b[..., 0] - d[..., 0], b[..., 1] - d[..., 1]
    cdx, cdy = c[..., 0] - d[..., 0], c[..., 1] - d[..., 1]
    bdxcdy, cdxbdy = bdx * cdy, cdx * bdy
    cdxady, adxcdy = cdx * ady, adx * cdy
    adxbdy, bdxady = adx * bdy, bdx * ady
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((np.abs(bdxcdy) + np.abs(cdxbdy)) * alift
                 + (np.abs(cdxady) + np.abs(adxcdy)) * blift
                 + (np.abs(adxbdy) + np.abs(bdxady)) * clift)
    out = np.sign(det).astype(np.int8)
    # d equal to a corner is exactly on the circle; no need for the fallback
    corner = (np.all(d == a, axis=-1) | np.all(d == b, axis=-1) | np.all(d == c, axis=-1))
    out[corner] = 0
    unsure = np.argwhere((np.abs(det) <= _ICC_ERRBOUND * permanent) & ~corner)
    if len(unsure):
        shape = out.shape
        A, B, C, D = (np.broadcast_to(v, shape + (2,)) for v in (a, b, c, d))
        for idx in map(tuple, unsure):
            out[idx] = _incircle_exact(A[idx], B[idx], C[idx], D[idx])
    return out
