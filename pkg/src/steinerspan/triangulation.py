"""Delaunay triangulation, sharpest angle, Euclidean MST and coverage counts."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    GeometryError,
    Point,
    _incircle_raw,
    angle_at,
    circumcircle,
    in_circumcircle_sos,
    incircle_many,
    make_point,
    orient2d,
)

INF = -1  # ghost vertex
MIN_ALPHA = 1e-6  # radians; below this the triangulation is rejected as too sharp
ANGLE_TOL = 1e-12


class InputError(GeometryError):
    """Invalid point set. ``code`` distinguishes the failure."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class TooFewSitesError(InputError):
    def __init__(self, n):
        super().__init__("too-few-sites", f"need at least 3 sites, got {n}")


class DuplicateSiteError(InputError):
    def __init__(self, i, j):
        super().__init__("duplicate-site", f"sites {i} and {j} coincide")
        self.pair = (i, j)


class CollinearSitesError(InputError):
    def __init__(self):
        super().__init__("all-collinear", "all sites are collinear")


class InvalidTriangulationError(InputError):
    def __init__(self, message):
        super().__init__("invalid-triangulation", message)


@dataclass(frozen=True)
class SpanningTree:
    edges: list[tuple[int, int]]
    weight: float


@dataclass(frozen=True)
class TriangulationStats:
    alpha: float
    dt_weight: float
    mst_weight: float
    fw: float
    fe: float


@dataclass(frozen=True)
class Lemma1Result:
    dt_weight: float
    mst_weight: float
    fw: float
    holds: bool


def weight_bound_factor(alpha: float) -> float:
    """(1 + cos a) / (1 - cos a): bound on w(DT) / w(MST)."""
    c = math.cos(alpha)
    return (1.0 + c) / (1.0 - c)


def coverage_bound(alpha: float) -> float:
    """2 pi / a: bound on how many circumdisks contain one point."""
    return 2.0 * math.pi / alpha


@dataclass(eq=False)
class Triangulation:
    """A triangulation of ``sites`` with counterclockwise index triples.

    ``edges`` maps each undirected edge ``(i, j)``, ``i < j``, to the indices
    of its one or two incident triangles; an edge with one triangle lies on
    the convex hull.
    """

    sites: list[Point]
    triangles: list[tuple[int, int, int]]
    edges: dict[tuple[int, int], list[int]] = field(init=False)

    def __post_init__(self):
        edges: dict[tuple[int, int], list[int]] = {}
        for t, (a, b, c) in enumerate(self.triangles):
            for u, v in ((a, b), (b, c), (c, a)):
                edges.setdefault((min(u, v), max(u, v)), []).append(t)
        self.edges = dict(sorted(edges.items()))

    @property
    def n(self) -> int:
        return len(self.sites)

    @property
    def coords(self) -> np.ndarray:
        return np.asarray(self.sites, dtype=float)

    def is_hull_edge(self, edge: tuple[int, int]) -> bool:
        return len(self.edges[edge]) == 1

    def edge_length(self, edge: tuple[int, int]) -> float:
        p, q = self.sites[edge[0]], self.sites[edge[1]]
        return math.hypot(q[0] - p[0], q[1] - p[1])

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def stats(self) -> TriangulationStats:
        alpha = sharpest_angle(self)
        l1 = lemma1_check(self)
        return TriangulationStats(alpha, l1.dt_weight, l1.mst_weight, l1.fw, coverage_bound(alpha))

    def circumcircles(self) -> tuple[np.ndarray, np.ndarray]:
        """Arrays of circumcenters (T, 2) and radii (T,)."""
        cs = [circumcircle(*(self.sites[i] for i in t)) for t in self.triangles]
        return (np.array([c.center for c in cs], dtype=float).reshape(-1, 2),
                np.array([c.radius for c in cs], dtype=float))


def _validate_sites(sites) -> list[Point]:
    pts = [make_point(*p) for p in sites]
    if len(pts) < 3:
        raise TooFewSitesError(len(pts))
    seen: dict[Point, int] = {}
    for i, p in enumerate(pts):
        if p in seen:
            raise DuplicateSiteError(seen[p], i)
        seen[p] = i
    if all(orient2d(pts[0], pts[1], p) == 0 for p in pts[2:]):
        raise CollinearSitesError()
    return pts


class _Builder:
    """Bowyer-Watson insertion with ghost triangles.

    A ghost ``(u, v, INF)`` sits across hull edge ``v -> u`` of a real
    triangle; its conflict region is the open half-plane left of ``u -> v``
    plus the open segment ``uv``.
    """

    def __init__(self, pts: list[Point]):
        self.p = pts
        self.tv: list[list[int]] = []  # vertices
        self.tn: list[list[int]] = []  # neighbor opposite each vertex
        self.alive: list[bool] = []
        self.last = 0

    def _new(self, a, b, c) -> int:
        self.tv.append([a, b, c])
        self.tn.append([-1, -1, -1])
        self.alive.append(True)
        return len(self.tv) - 1

    def _conflict(self, t: int, q: int) -> bool:
        a, b, c = self.tv[t]
        pts = self.p
        if c == INF:
            o = orient2d(pts[a], pts[b], pts[q])
            if o != 0:
                return o > 0
            pa, pb, pq = pts[a], pts[b], pts[q]
            return (min(pa[0], pb[0]) <= pq[0] <= max(pa[0], pb[0])
                    and min(pa[1], pb[1]) <= pq[1] <= max(pa[1], pb[1]))
        return in_circumcircle_sos(pts[a], pts[b], pts[c], pts[q], a, b, c, q) > 0

    def start(self, a, b, c):
        if orient2d(self.p[a], self.p[b], self.p[c]) < 0:
            b, c = c, b
        t = self._new(a, b, c)
        g = [self._new(b, a, INF), self._new(c, b, INF), self._new(a, c, INF)]
        self._link_all([t] + g)
        self.last = t

    def _link_all(self, tris):
        edge_owner: dict[tuple[int, int], tuple[int, int]] = {}
        for t in tris:
            v = self.tv[t]
            for k in range(3):
                u, w = v[(k + 1) % 3], v[(k + 2) % 3]
                other = edge_owner.pop((w, u), None)
                if other is not None:
                    t2, k2 = other
                    self.tn[t][k] = t2
                    self.tn[t2][k2] = t
                else:
                    edge_owner[(u, w)] = (t, k)
        return edge_owner

    def _locate(self, q: int) -> int:
        pts = self.p
        t = self.last
        if not self.alive[t]:
            t = next(i for i in range(len(self.tv) - 1, -1, -1) if self.alive[i])
        rng = random.Random(q)
        for _ in range(4 * len(self.tv) + 10):
            v = self.tv[t]
            if INF in v:
                if self._conflict(t, q):
                    return t
                # step onto the real triangle behind the ghost
                t = self.tn[t][v.index(INF)]
                continue
            ks = [0, 1, 2]
            rng.shuffle(ks)
            for k in ks:
                u, w = v[(k + 1) % 3], v[(k + 2) % 3]
                if orient2d(pts[u], pts[w], pts[q]) < 0:
                    t = self.tn[t][k]
                    break
            else:
                return t
        for t, ok in enumerate(self.alive):  # fallback, should not happen
            if ok and self._conflict(t, q):
                return t
        raise AssertionError("point location failed")

    def insert(self, q: int):
        t0 = self._locate(q)
        if not self._conflict(t0, q):
            # q is on the closed triangle but not in its open circumdisk: only
            # possible on an edge shared with a conflicting neighbour
            t0 = next(n for n in self.tn[t0] if n >= 0 and self._conflict(n, q))
        cavity = {t0}
        stack = [t0]
        while stack:
            t = stack.pop()
            for n in self.tn[t]:
                if n not in cavity and self._conflict(n, q):
                    cavity.add(n)
                    stack.append(n)
        boundary = []
        for t in cavity:
            v = self.tv[t]
            for k in range(3):
                n = self.tn[t][k]
                if n not in cavity:
                    boundary.append((v[(k + 1) % 3], v[(k + 2) % 3], n, t))
        for t in cavity:
            self.alive[t] = False
        new = []
        for u, w, n, _ in boundary:
            a, b, c = u, w, q
            if a == INF:
                a, b, c = b, c, a
            elif b == INF:
                a, b, c = c, a, b
            nt = self._new(a, b, c)
            new.append(nt)
            # link to outside neighbour across (u, w)
            if n >= 0:
                nv = self.tv[n]
                for k in range(3):
                    if {nv[(k + 1) % 3], nv[(k + 2) % 3]} == {u, w}:
                        self.tn[n][k] = nt
                kk = [a, b, c].index(q)
                self.tn[nt][kk] = n
        # link new triangles among themselves (edges through q)
        owner: dict[tuple[int, int], tuple[int, int]] = {}
        for t in new:
            v = self.tv[t]
            for k in range(3):
                u, w = v[(k + 1) % 3], v[(k + 2) % 3]
                if q not in (u, w):
                    continue
                other = owner.pop((w, u), None)
                if other is not None:
                    self.tn[t][k] = other[0]
                    self.tn[other[0]][other[1]] = t
                else:
                    owner[(u, w)] = (t, k)
        if owner:
            raise AssertionError("cavity is not star-shaped")
        self.last = next((t for t in new if INF not in self.tv[t]), new[0])

    def triangles(self) -> list[tuple[int, int, int]]:
        out = []
        for t, ok in enumerate(self.alive):
            if ok and INF not in self.tv[t]:
                a, b, c = self.tv[t]
                k = [a, b, c].index(min(a, b, c))
                out.append(tuple(([a, b, c] * 2)[k:k + 3]))
        return sorted(out)


def build_delaunay(sites, seed: int = 0) -> Triangulation:
    """Delaunay triangulation by randomized incremental insertion.

    Exactly cocircular sites are resolved by symbolic perturbation of the
    lifted heights by site index (see ``in_circumcircle_sos``), so the result
    depends only on the coordinates and the site order, not on ``seed``.
    """
    pts = _validate_sites(sites)
    n = len(pts)
    c = next(k for k in range(2, n) if orient2d(pts[0], pts[1], pts[k]) != 0)
    b = _Builder(pts)
    b.start(0, 1, c)
    rest = [k for k in range(2, n) if k != c]
    random.Random(seed).shuffle(rest)
    for q in rest:
        b.insert(q)
    return Triangulation(pts, b.triangles())


def triangulation_from_triangles(sites, triangles, check_delaunay: bool = True) -> Triangulation:
    """Ingest a precomputed triangulation, validating it against ``sites``."""
    pts = _validate_sites(sites)
    n = len(pts)
    tris = []
    for t in triangles:
        a, b, c = (int(i) for i in t)
        if not all(0 <= i < n for i in (a, b, c)) or len({a, b, c}) < 3:
            raise InvalidTriangulationError(f"bad triangle {t}")
        o = orient2d(pts[a], pts[b], pts[c])
        if o == 0:
            raise InvalidTriangulationError(f"degenerate triangle {t}")
        if o < 0:
            b, c = c, b
        k = [a, b, c].index(min(a, b, c))
        tris.append(tuple(([a, b, c] * 2)[k:k + 3]))
    tris.sort()
    T = Triangulation(pts, tris)
    used = {i for t in tris for i in t}
    if len(used) != n:
        raise InvalidTriangulationError("not every site is a triangle vertex")
    directed = set()
    for a, b, c in tris:
        for e in ((a, b), (b, c), (c, a)):
            if e in directed:
                raise InvalidTriangulationError(f"edge {e} used twice in the same direction")
            directed.add(e)
    hull = [e for e, ts in T.edges.items() if len(ts) == 1]
    if any(len(ts) > 2 for ts in T.edges.values()):
        raise InvalidTriangulationError("non-manifold edge")
    # a triangulation of the convex hull has 2n - 2 - h triangles, h hull sites
    hull_sites = {i for e in hull for i in e}
    if len(tris) != 2 * n - 2 - len(hull_sites) or len(hull) != len(hull_sites):
        raise InvalidTriangulationError("triangles do not tile the convex hull")
    for a, b, c in tris:
        for u, v in ((a, b), (b, c), (c, a)):
            if T.is_hull_edge((min(u, v), max(u, v))):
                if any(orient2d(pts[u], pts[v], pts[w]) < 0 for w in range(n)):
                    raise InvalidTriangulationError("boundary is not the convex hull")
    if check_delaunay:
        bad = empty_circle_violations(T)
        if bad:
            raise InvalidTriangulationError(f"triangle {bad[0]} has a site inside its circumcircle")
    return T


def empty_circle_violations(T: Triangulation) -> list[tuple[int, int]]:
    """All (triangle index, site) pairs with the site strictly inside the circumcircle."""
    P = T.coords
    out = []
    for t, (a, b, c) in enumerate(T.triangles):
        s = incircle_many(P[a], P[b], P[c], P)
        out.extend((t, int(i)) for i in np.flatnonzero(s > 0))
    return out


def triangle_angles(T: Triangulation) -> np.ndarray:
    """(T, 3) interior angles, one per triangle corner."""
    P = T.sites
    return np.array([[angle_at(P[a], P[b], P[c]), angle_at(P[b], P[c], P[a]),
                      angle_at(P[c], P[a], P[b])] for a, b, c in T.triangles])


def sharpest_angle(T: Triangulation) -> float:
    return float(triangle_angles(T).min())


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def euclidean_mst(T: Triangulation) -> SpanningTree:
    """Kruskal over Delaunay edges; equal lengths are taken in edge-index order."""
    order = sorted(T.edges, key=lambda e: (T.edge_length(e), e))
    dsu = _DSU(T.n)
    edges = [e for e in order if dsu.union(*e)]
    return SpanningTree(edges, math.fsum(T.edge_length(e) for e in edges))


def dt_weight(T: Triangulation) -> float:
    return math.fsum(T.edge_length(e) for e in T.edges)


def lemma1_check(T: Triangulation) -> Lemma1Result:
    """Compare w(DT) with (1 + cos a)/(1 - cos a) * w(MST)."""
    alpha = sharpest_angle(T)
    fw = weight_bound_factor(alpha)
    w_dt = dt_weight(T)
    w_mst = euclidean_mst(T).weight
    return Lemma1Result(w_dt, w_mst, fw, w_dt <= fw * w_mst)


def circumdisk_coverage(x, T: Triangulation) -> int:
    """Number of triangles whose open circumdisk contains ``x``."""
    return int(circumdisk_coverage_many(np.asarray([x], dtype=float), T)[0])


def circumdisk_coverage_many(X: np.ndarray, T: Triangulation) -> np.ndarray:
    """Vectorized :func:`circumdisk_coverage` for query points ``X`` (Q, 2)."""
    X = np.asarray(X, dtype=float).reshape(-1, 2)
    centers, radii = T.circumcircles()
    counts = np.zeros(len(X), dtype=np.int64)
    P = T.sites
    for t, (a, b, c) in enumerate(T.triangles):
        d2 = ((X - centers[t]) ** 2).sum(axis=1)
        r2 = radii[t] ** 2
        inside = d2 < r2 * (1 - 1e-9)
        unsure = np.flatnonzero(np.abs(d2 - r2) <= r2 * 1e-9)
        counts += inside
        for i in unsure:
            counts[i] += _incircle_raw(P[a], P[b], P[c], X[i]) > 0
    return counts
