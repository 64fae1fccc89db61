"""Angle-bounded escape paths inside a convex polygon.

For a direction ``theta`` and half-angle ``delta`` every boundary point that
is not (theta +- delta)-extreme shoots two rays, at ``theta - delta`` and
``theta + delta``, each stopped by the first earlier segment it meets or by
the polygon boundary. Points are processed from the two ends of the
non-extreme run, then by recursive median splitting, which keeps the total
segment length within O(perimeter * log n / delta).

Points on an edge whose direction is itself within ``delta`` of ``theta``
shoot nothing: their escape path runs along the boundary. Rays from such
points would all be parallel, never stop each other, and add length linear
in n.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .geometry import GeometryError, Point, dist, orient2d
from .portals import ParameterError

TWO_PI = 2.0 * math.pi


def _wrap(a: float) -> float:
    return a % TWO_PI


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        vs = tuple(Point(float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", vs)
        n = len(vs)
        if n < 3:
            raise GeometryError("a convex polygon needs at least 3 vertices")
        for i in range(n):
            if orient2d(vs[i], vs[(i + 1) % n], vs[(i + 2) % n]) <= 0:
                raise GeometryError("polygon is not strictly convex and counterclockwise")

    def __len__(self):
        return len(self.vertices)

    @property
    def perimeter(self) -> float:
        vs = self.vertices
        return math.fsum(dist(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def edge(self, i: int) -> tuple[Point, Point]:
        return self.vertices[i], self.vertices[(i + 1) % len(self.vertices)]

    def edge_angle(self, i: int) -> float:
        a, b = self.edge(i)
        return math.atan2(b[1] - a[1], b[0] - a[0])

    def point_at(self, edge: int, t: float) -> Point:
        a, b = self.edge(edge)
        if t == 0.0:
            return a
        if t == 1.0:
            return b
        return Point(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))

    def interior_cone(self, edge: int, t: float) -> tuple[float, float]:
        """(start angle, width) of the directions pointing into the polygon."""
        n = len(self.vertices)
        if t >= 1.0:
            edge, t = (edge + 1) % n, 0.0
        start = self.edge_angle(edge)
        if t > 0.0:
            return _wrap(start), math.pi
        prev = self.edge_angle((edge - 1) % n)
        # interior angle = pi - turning angle
        turn = _wrap(start - prev)
        return _wrap(start), math.pi - turn

    def contains(self, p, tol: float = 0.0) -> bool:
        vs = self.vertices
        n = len(vs)
        for i in range(n):
            a, b = vs[i], vs[(i + 1) % n]
            cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            if cross < -tol * dist(a, b):
                return False
        return True


class BoundaryPoint(NamedTuple):
    edge: int
    t: float
    point: Point

    @classmethod
    def on(cls, K: ConvexPolygon, edge: int, t: float) -> "BoundaryPoint":
        if not 0.0 <= t <= 1.0:
            raise GeometryError("boundary parameter outside [0, 1]")
        if t == 1.0:
            edge, t = (edge + 1) % len(K), 0.0
        return cls(edge, t, K.point_at(edge, t))

    def position(self) -> float:
        return self.edge + self.t


def _cone_hits_interval(lo: float, width: float, theta: float, delta: float, slack: float = 1e-12) -> bool:
    """Do the open cones (theta-delta, theta+delta) and (lo, lo+width) overlap?

    Cones that only share a bounding direction (a ray grazing the boundary)
    do not count, matching :func:`enters`.
    """
    c0 = _wrap(theta - delta)
    return _wrap(c0 - lo) < width - slack or _wrap(lo - c0) < 2.0 * delta - slack


def is_extreme(K: ConvexPolygon, edge: int, t: float, theta: float, delta: float) -> bool:
    """No ray within ``delta`` of ``theta`` runs into the interior of K."""
    lo, width = K.interior_cone(edge, t)
    return not _cone_hits_interval(lo, width, theta, delta)


def boundary_step(K: ConvexPolygon, edge: int, t: float, theta: float, delta: float,
                  slack: float = 1e-12) -> int:
    """+1 (-1) if walking forward (backward) along the boundary from this point
    stays within ``delta`` of ``theta``; 0 if neither does."""
    n = len(K)
    fwd = K.edge_angle(edge)
    back = (K.edge_angle(edge) if t > 0.0 else K.edge_angle((edge - 1) % n)) + math.pi
    for step, ang in ((1, fwd), (-1, back)):
        if abs((ang - theta + math.pi) % TWO_PI - math.pi) <= delta + slack:
            return step
    return 0


class Arc(NamedTuple):
    start: BoundaryPoint
    end: BoundaryPoint


def extreme_arc(K: ConvexPolygon, theta: float, delta: float) -> Arc:
    """Maximal counterclockwise boundary arc of (theta +- delta)-extreme points.

    Extreme edges always have extreme endpoints, so the arc runs from corner to
    corner; it may degenerate to a single corner.
    """
    if not 0.0 <= delta < math.pi / 2:
        raise ParameterError("delta must lie in [0, pi/2)")
    n = len(K)
    # boundary elements in ccw order: corner i, then interior of edge i
    flags = []
    for i in range(n):
        flags.append(is_extreme(K, i, 0.0, theta, delta))
        flags.append(is_extreme(K, i, 0.5, theta, delta))
    m = len(flags)
    # a run start is an extreme element preceded by a non-extreme one
    starts = [k for k in range(m) if flags[k] and not flags[k - 1]]
    if not starts:
        raise AssertionError("no extreme point found")
    s = starts[0]
    e = s
    while flags[(e + 1) % m] and (e + 1) % m != s:
        e = (e + 1) % m
    return Arc(BoundaryPoint.on(K, s // 2, 0.0), BoundaryPoint.on(K, e // 2, 0.0))


class WedgeSegment(NamedTuple):
    origin: int  # index into the input point list
    side: int  # -1 for theta - delta, +1 for theta + delta
    a: Point
    b: Point
    end_kind: str  # "boundary" or "segment"
    hit: int  # index of the segment hit, -1 for boundary

    @property
    def length(self) -> float:
        return dist(self.a, self.b)


@dataclass(frozen=True)
class SegmentSystem:
    theta: float
    delta: float
    points: tuple[BoundaryPoint, ...]
    segments: tuple[WedgeSegment, ...]
    order: tuple[int, ...]  # processing order of ray-shooting points
    polygon: ConvexPolygon | None = None
    steps: tuple[int, ...] = ()  # boundary_step of each point, 0 if extreme

    @property
    def total_length(self) -> float:
        return math.fsum(s.length for s in self.segments)

    @cached_property
    def by_position(self) -> tuple[list[float], list[int]]:
        """Boundary positions in increasing order (one index per position)."""
        seen: dict[float, int] = {}
        for j, q in enumerate(self.points):
            seen.setdefault(q.position(), j)
        keys = sorted(seen)
        return keys, [seen[k] for k in keys]

    def segments_from(self, origin: int) -> list[int]:
        return [k for k, s in enumerate(self.segments) if s.origin == origin]


def processing_order(seq: list[int]) -> list[int]:
    """Both ends of ``seq``, then recursive lower medians (depth first)."""
    if not seq:
        return []
    out = [seq[0]] if len(seq) == 1 else [seq[0], seq[-1]]

    def rec(lo: int, hi: int):
        if hi - lo < 2:
            return
        mid = (lo + hi) // 2
        out.append(seq[mid])
        rec(lo, mid)
        rec(mid, hi)

    rec(0, len(seq) - 1)
    return out


def _boundary_exit(K: ConvexPolygon, p, dx, dy, skip_tol: float) -> float:
    """Distance along the ray p + s (dx, dy) to where it leaves K."""
    best = math.inf
    vs = K.vertices
    n = len(vs)
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        # outward normal of a ccw edge
        nx, ny = b[1] - a[1], a[0] - b[0]
        dn = dx * nx + dy * ny
        if dn > 0.0:
            s = ((a[0] - p[0]) * nx + (a[1] - p[1]) * ny) / dn
            if s > skip_tol and s < best:
                best = s
    return best


def _ray_hit(px, py, dx, dy, a, b, smin: float) -> float:
    ex, ey = b[0] - a[0], b[1] - a[1]
    den = dx * ey - dy * ex
    if den == 0.0:
        return math.inf
    wx, wy = a[0] - px, a[1] - py
    s = (wx * ey - wy * ex) / den
    if s <= smin:
        return math.inf
    u = (wx * dy - wy * dx) / den
    if -1e-12 <= u <= 1.0 + 1e-12:
        return s
    return math.inf


def _ray_hits(px, py, dx, dy, A: np.ndarray, B: np.ndarray, smin: float) -> np.ndarray:
    """Vectorized :func:`_ray_hit` against segments ``A[k] B[k]``."""
    ex, ey = B[:, 0] - A[:, 0], B[:, 1] - A[:, 1]
    wx, wy = A[:, 0] - px, A[:, 1] - py
    with np.errstate(divide="ignore", invalid="ignore"):
        den = dx * ey - dy * ex
        s = (wx * ey - wy * ex) / den
        u = (wx * dy - wy * dx) / den
    ok = (den != 0.0) & (s > smin) & (u >= -1e-12) & (u <= 1.0 + 1e-12)
    return np.where(ok, s, np.inf)


def enters(K: ConvexPolygon, bp: BoundaryPoint, angle: float, slack: float = 1e-12) -> bool:
    """Does the ray from ``bp`` at ``angle`` run into the interior of K?

    Rays within ``slack`` radians of the boundary are treated as running
    along it, and so as not entering.
    """
    lo, width = K.interior_cone(bp.edge, bp.t)
    off = _wrap(angle - lo)
    return slack < off < width - slack


def build_wedges(K: ConvexPolygon, P, theta: float, delta: float,
                 extreme: list[bool] | None = None) -> SegmentSystem:
    """Segment system for direction ``theta`` over boundary points ``P``."""
    if not 0.0 < delta < math.pi / 2:
        raise ParameterError("delta must lie in (0, pi/2)")
    P = tuple(P)
    n = len(P)
    if extreme is None:
        extreme = [is_extreme(K, bp.edge, bp.t, theta, delta) for bp in P]
    steps = [0 if extreme[i] else boundary_step(K, P[i].edge, P[i].t, theta, delta) for i in range(n)]
    shoots = [not extreme[i] and steps[i] == 0 for i in range(n)]
    pos = sorted(range(n), key=lambda i: P[i].position())
    nonext = [i for i in pos if shoots[i]]
    if len(nonext) < n and nonext:
        # rotate so the shooting run is contiguous in the cyclic order
        ring = [shoots[i] for i in pos]
        k = next(j for j in range(n) if ring[j] and not ring[j - 1])
        nonext = [pos[(k + j) % n] for j in range(n) if ring[(k + j) % n]]
    order = processing_order(nonext)

    scale = K.perimeter
    smin = 1e-12 * scale
    dirs = ((-1, theta - delta), (1, theta + delta))
    segs: list[WedgeSegment] = []
    # endpoints and global indices of the segments of each side, in creation order
    cap = len(order) + 1
    store = {side: (np.empty((cap, 2)), np.empty((cap, 2)), np.empty(cap, dtype=np.int64), [0])
             for side, _ in dirs}
    for i in order:
        bp = P[i]
        px, py = bp.point
        for side, ang in dirs:
            if not enters(K, bp, ang):
                continue
            dx, dy = math.cos(ang), math.sin(ang)
            s_end = _boundary_exit(K, bp.point, dx, dy, smin)
            hit = -1
            A, B, gid, cnt = store[-side]  # segments of the same side are parallel
            m = cnt[0]
            if m:
                s_hit = _ray_hits(px, py, dx, dy, A[:m], B[:m], smin)
                k = int(np.argmin(s_hit))
                if s_hit[k] < s_end:
                    s_end, hit = float(s_hit[k]), int(gid[k])
            if not math.isfinite(s_end):
                continue
            end = Point(px + s_end * dx, py + s_end * dy)
            A, B, gid, cnt = store[side]
            A[cnt[0]] = bp.point
            B[cnt[0]] = end
            gid[cnt[0]] = len(segs)
            cnt[0] += 1
            segs.append(WedgeSegment(i, side, bp.point, end,
                                     "boundary" if hit < 0 else "segment", hit))
    return SegmentSystem(theta, delta, P, tuple(segs), tuple(order), K, tuple(steps))


def trace_path(start: int, system: SegmentSystem, side: int = -1) -> list[Point]:
    """Angle-bounded escape path from input point ``start``.

    Follows the ``side`` ray (the other one if that ray does not exist), then
    each segment hit in turn, until a segment ends on the boundary. Points
    that shoot no rays walk along the boundary instead. Returns an empty list
    when ``start`` is extreme.
    """
    path: list[Point] = []
    cur = start
    while system.steps and cur is not None and system.steps[cur]:
        path.append(system.points[cur].point)
        cur, corner = _next_on_boundary(cur, system)
        if cur is None:
            path.append(corner)
    if cur is None:
        return path
    rays = _trace_rays(cur, system, side)
    if path and not rays:
        return path + [system.points[cur].point]
    return path + rays


def _next_on_boundary(i: int, system: SegmentSystem):
    """Next input point from ``i`` in its step direction, or (None, corner)
    when the walk reaches a corner that ends it."""
    K = system.polygon
    n = len(K)
    theta, delta = system.theta, system.delta
    keys, idx = system.by_position
    bp = system.points[i]
    edge, t, step = bp.edge, bp.t, system.steps[i]
    while True:
        x = edge + t
        if step > 0:
            corner = (edge + 1) % n
            k = bisect.bisect_right(keys, x)
            if k < len(keys) and keys[k] <= edge + 1:
                return idx[k], None
            if corner == 0 and keys and keys[0] == 0.0:
                return idx[0], None
        else:
            e = edge if t > 0.0 else (edge - 1) % n
            corner = e
            hi = x if t > 0.0 else e + 1
            k = bisect.bisect_left(keys, hi) - 1
            if k >= 0 and keys[k] >= e:
                return idx[k], None
        # the corner is not an input point: keep walking if allowed
        cpt = K.vertices[corner]
        step = 0 if is_extreme(K, corner, 0.0, theta, delta) else boundary_step(K, corner, 0.0, theta, delta)
        if not step:
            return None, cpt
        edge, t = corner, 0.0


def _trace_rays(start: int, system: SegmentSystem, side: int) -> list[Point]:
    own = system.segments_from(start)
    if not own:
        if start in system.order:
            raise GeometryError("start point emits no segment into the polygon")
        return []
    k = next((j for j in own if system.segments[j].side == side), own[0])
    path = [system.segments[k].a]
    seen = set()
    while True:
        if k in seen:
            raise AssertionError("cycle while tracing wedge path")
        seen.add(k)
        sg = system.segments[k]
        path.append(sg.b)
        if sg.end_kind == "boundary":
            return path
        if sg.hit >= k:
            raise AssertionError("segment hit a later segment")
        # continue along the hit segment from the hit point towards its end
        k = sg.hit


def path_length(path) -> float:
    return math.fsum(dist(path[i], path[i + 1]) for i in range(len(path) - 1))


def wedge_length_bound(perimeter: float, n: int, delta: float) -> float:
    """(perimeter * ln(max(n, 2))) / delta, the shape of the total-length bound."""
    return perimeter * math.log(max(n, 2)) / delta


def max_link_deviation(path, theta: float) -> float:
    """Largest angle between a path link and direction ``theta``."""
    worst = 0.0
    for i in range(len(path) - 1):
        dx, dy = path[i + 1][0] - path[i][0], path[i + 1][1] - path[i][1]
        if dx == 0.0 and dy == 0.0:
            continue
        d = abs((math.atan2(dy, dx) - theta + math.pi) % TWO_PI - math.pi)
        worst = max(worst, d)
    return worst


def system_arrays(system: SegmentSystem) -> np.ndarray:
    """(m, 2, 2) array of segment endpoints."""
    if not system.segments:
        return np.zeros((0, 2, 2))
    return np.array([[s.a, s.b] for s in system.segments], dtype=float)
