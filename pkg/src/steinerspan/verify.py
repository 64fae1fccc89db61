"""Independent checks on built spanners: dilation, planarity, triangulation oracles
and exact tours."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.sparse.csgraph import connected_components, dijkstra, minimum_spanning_tree, shortest_path

from .arrangement import PlanarGraph
from .geometry import GeometryError, incircle_many, orient2d, orient2d_many
from .triangulation import (
    Triangulation,
    build_delaunay,
    circumdisk_coverage_many,
    coverage_bound,
    lemma1_check,
    sharpest_angle,
)


class DisconnectedError(GeometryError):
    def __init__(self, site: int):
        super().__init__(f"site {site} is not connected to site 0")
        self.site = site


# ---------------------------------------------------------------- dilation

@dataclass
class Dilation:
    ratio: float
    pair: tuple[int, int]
    graph_distance: float
    euclidean: float
    path: list[int] = field(default_factory=list)


def _split_graph(graph, site_map):
    if hasattr(graph, "graph"):
        return graph.graph, np.asarray(graph.site_map, dtype=np.int64)
    return graph, np.asarray(site_map, dtype=np.int64)


def check_connected(graph: PlanarGraph, sites: np.ndarray) -> None:
    _, comp = connected_components(graph.csr(), directed=False)
    bad = np.flatnonzero(comp[sites] != comp[sites[0]])
    if len(bad):
        raise DisconnectedError(int(bad[0]))


def _sssp(csr, sources, limit=np.inf, chunk: int = 16) -> np.ndarray:
    out = []
    for s in range(0, len(sources), chunk):
        out.append(dijkstra(csr, directed=False, indices=sources[s:s + chunk], limit=limit))
    return np.concatenate(out) if out else np.zeros((0, csr.shape[0]))


class SiteDistances:
    """Exact site-to-site distances, computed lazily.

    Searches from each site stop at a radius covering its nearest sites; the
    remaining pairs get upper bounds by chaining exact distances through
    intermediate sites. :meth:`max_ratio` refines only the pairs whose bound
    could still beat the best exact ratio, so its result is exact.
    """

    def __init__(self, graph: PlanarGraph, sites, near: int = 12, reach: float = 1.5):
        self.graph = graph
        self.sites = np.asarray(sites, dtype=np.int64)
        self.csr = graph.csr()
        n = len(self.sites)
        P = graph.vertices[self.sites]
        self.E = np.hypot(P[:, None, 0] - P[None, :, 0], P[:, None, 1] - P[None, :, 1])
        self.D = np.full((n, n), np.inf)
        np.fill_diagonal(self.D, 0.0)
        self.exact = np.eye(n, dtype=bool)
        k = min(n - 1, near)
        radius = np.sort(self.E, axis=1)[:, k] * reach
        order = np.argsort(radius, kind="stable")
        for s in range(0, n, 16):
            src = order[s:s + 16]
            self._settle(src, float(radius[src].max()))

    def _settle(self, src, limit):
        D = _sssp(self.csr, self.sites[src], limit)[:, self.sites]
        for r, s in enumerate(src):
            ok = np.isfinite(D[r])
            self.D[s, ok] = D[r, ok]
            self.D[ok, s] = D[r, ok]
            self.exact[s, ok] = True
            self.exact[ok, s] = True

    def max_ratio(self) -> tuple[float, int, int]:
        E = self.E.copy()
        np.fill_diagonal(E, np.inf)
        while True:
            R = np.where(self.exact, self.D / E, -np.inf)
            i, j = np.unravel_index(int(np.argmax(R)), R.shape)
            best = R[i, j]
            UB = shortest_path(self.D, method="D", directed=False)
            loose = ~self.exact & (UB > best * E)
            if not loose.any():
                return float(best), int(i), int(j)
            rows = np.flatnonzero(loose.any(axis=1))
            # refine the rows with most loose pairs; exact distances are <= UB
            rows = rows[np.argsort(-loose[rows].sum(axis=1), kind="stable")][:8]
            for s in rows:
                if loose[s].any():
                    self._settle(np.array([s]), float(UB[s][loose[s]].max()) * (1 + 1e-12))
                    loose[s] = False
                    loose[:, s] = False

    def all(self) -> np.ndarray:
        """The full exact distance matrix (forces every search to completion)."""
        rows = np.flatnonzero(~self.exact.all(axis=1))
        if len(rows):
            self._settle(rows, np.inf)
        return self.D


def witness_path(graph: PlanarGraph, s: int, t: int) -> tuple[float, list[int]]:
    """Vertex path from s to t and its length summed with math.fsum."""
    D, pred = dijkstra(graph.csr(), directed=False, indices=s, return_predecessors=True)
    if not np.isfinite(D[t]):
        return math.inf, []
    path = [t]
    while path[-1] != s:
        path.append(int(pred[path[-1]]))
    path.reverse()
    V = graph.vertices
    L = math.fsum(math.hypot(*(V[path[i + 1]] - V[path[i]])) for i in range(len(path) - 1))
    return L, path


def max_dilation(spanner, pairs="all", k: int = 1000, seed: int = 0, site_map=None) -> Dilation:
    """Largest graph / Euclidean distance ratio over site pairs.

    ``pairs`` is ``"all"`` or ``"sample"``; the sample draws ``k`` pairs with
    a seeded generator. The witness path is recomputed on the full graph and
    its length summed exactly rounded.
    """
    graph, sites = _split_graph(spanner, site_map)
    n = len(sites)
    if n < 2:
        raise GeometryError("need at least two sites")
    check_connected(graph, sites)
    P = graph.vertices[sites]
    if pairs == "all":
        _, i, j = SiteDistances(graph, sites).max_ratio()
    elif pairs == "sample":
        rng = np.random.default_rng(seed)
        I = rng.integers(0, n, size=k)
        J = (I + rng.integers(1, n, size=k)) % n
        srcs, inv = np.unique(I, return_inverse=True)
        D = _sssp(graph.csr(), sites[srcs])[:, sites]
        d = D[inv, J]
        e = np.hypot(*(P[I] - P[J]).T)
        b = int(np.argmax(d / e))
        i, j = int(I[b]), int(J[b])
    else:
        raise ValueError(f"pairs must be 'all' or 'sample', got {pairs!r}")
    i, j = (int(i), int(j)) if i < j else (int(j), int(i))
    L, path = witness_path(graph, int(sites[i]), int(sites[j]))
    e = math.hypot(*(P[j] - P[i]))
    return Dilation(L / e, (i, j), L, e, path)


# --------------------------------------------------------------- planarity

@dataclass
class PlaneCheck:
    is_plane: bool
    witness: tuple[int, int] | None = None

    def __bool__(self):
        return self.is_plane


def _grid_pairs(lo, hi, target: float = 8.0):
    """Candidate pairs of boxes via a uniform grid (deduplicated, i < j)."""
    m = len(lo)
    if m < 2:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    span = np.maximum(hi.max(0) - lo.min(0), 1e-300)
    ext = hi - lo
    h = max(float(np.median(np.maximum(ext[:, 0], ext[:, 1]))) * 2.0,
            float(max(span)) / 4096.0)
    if h <= 0:
        h = float(max(span))
    origin = lo.min(0)
    c0 = np.floor((lo - origin) / h).astype(np.int64)
    c1 = np.floor((hi - origin) / h).astype(np.int64)
    nx = c1[:, 0] - c0[:, 0] + 1
    ny = c1[:, 1] - c0[:, 1] + 1
    cnt = nx * ny
    owner = np.repeat(np.arange(m), cnt)
    start = np.repeat(np.cumsum(cnt) - cnt, cnt)
    off = np.arange(len(owner)) - start
    cx = c0[owner, 0] + off // ny[owner]
    cy = c0[owner, 1] + off % ny[owner]
    W = int(c1[:, 1].max()) + 2
    cell = cx * W + cy
    order = np.lexsort((owner, cell))
    cell, owner = cell[order], owner[order]
    bnd = np.flatnonzero(np.diff(cell)) + 1
    starts = np.r_[0, bnd]
    sizes = np.diff(np.r_[starts, len(cell)])
    I, J = [], []
    for size in np.unique(sizes[sizes > 1]):
        st = starts[sizes == size]
        a, b = np.triu_indices(int(size), 1)
        I.append(owner[(st[:, None] + a[None]).ravel()])
        J.append(owner[(st[:, None] + b[None]).ravel()])
    if not I:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    I, J = np.concatenate(I), np.concatenate(J)
    key = np.unique(I * m + J)
    return key // m, key % m


def _violations(V, E, I, J) -> np.ndarray:
    """Mask of edge pairs (I, J) that meet anywhere except a shared endpoint."""
    a, b = E[I, 0], E[I, 1]
    c, d = E[J, 0], E[J, 1]
    bad = np.zeros(len(I), dtype=bool)
    share = (a == c) | (a == d) | (b == c) | (b == d)
    dup = ((a == c) & (b == d)) | ((a == d) & (b == c))
    bad |= dup
    one = share & ~dup
    if one.any():
        k = np.flatnonzero(one)
        p = np.where((a[k] == c[k]) | (a[k] == d[k]), a[k], b[k])
        q = np.where(p == a[k], b[k], a[k])
        r = np.where(p == c[k], d[k], c[k])
        col = orient2d_many(V[p], V[q], V[r]) == 0
        same_dir = ((V[q] - V[p]) * (V[r] - V[p])).sum(1) > 0
        bad[k] = col & same_dir
    k = np.flatnonzero(~share)
    if len(k):
        A, B, C, D = V[a[k]], V[b[k]], V[c[k]], V[d[k]]
        o1 = orient2d_many(A, B, C).astype(int)
        o2 = orient2d_many(A, B, D).astype(int)
        o3 = orient2d_many(C, D, A).astype(int)
        o4 = orient2d_many(C, D, B).astype(int)
        proper = (o1 * o2 <= 0) & (o3 * o4 <= 0)
        allcol = (o1 == 0) & (o2 == 0)
        lo1, hi1 = np.minimum(A, B), np.maximum(A, B)
        lo2, hi2 = np.minimum(C, D), np.maximum(C, D)
        overlap = np.all((lo1 <= hi2) & (lo2 <= hi1), axis=1)
        bad[k] = np.where(allcol, overlap, proper)
    return bad


def check_plane(graph: PlanarGraph) -> PlaneCheck:
    """Exact test that no two edges meet except at a shared endpoint.

    Returns the lexicographically first violating edge pair as witness.
    """
    V, E = graph.vertices, graph.edges
    if len(E) < 2:
        return PlaneCheck(True)
    A, B = V[E[:, 0]], V[E[:, 1]]
    lo, hi = np.minimum(A, B), np.maximum(A, B)
    I, J = _grid_pairs(lo, hi)
    touch = np.all((lo[I] <= hi[J]) & (lo[J] <= hi[I]), axis=1)
    I, J = I[touch], J[touch]
    worst = None
    for s in range(0, len(I), 1 << 20):
        bad = _violations(V, E, I[s:s + (1 << 20)], J[s:s + (1 << 20)])
        if bad.any():
            h = np.flatnonzero(bad)
            cand = min(zip(I[s:s + (1 << 20)][h].tolist(), J[s:s + (1 << 20)][h].tolist()))
            worst = cand if worst is None else min(worst, cand)
    return PlaneCheck(worst is None, worst)


def check_plane_bruteforce(graph: PlanarGraph) -> PlaneCheck:
    """All-pairs version of :func:`check_plane` (small graphs only)."""
    E = graph.edges
    I, J = np.triu_indices(len(E), 1)
    bad = _violations(graph.vertices, E, I, J)
    if bad.any():
        h = int(np.flatnonzero(bad)[0])
        return PlaneCheck(False, (int(I[h]), int(J[h])))
    return PlaneCheck(True)


def proper_crossing_count(segments) -> int:
    """Pairs of segments crossing at a point interior to both (brute force)."""
    S = np.asarray(segments, dtype=float).reshape(-1, 2, 2)
    I, J = np.triu_indices(len(S), 1)
    if not len(I):
        return 0
    A, B, C, D = S[I, 0], S[I, 1], S[J, 0], S[J, 1]
    o1 = orient2d_many(A, B, C).astype(int)
    o2 = orient2d_many(A, B, D).astype(int)
    o3 = orient2d_many(C, D, A).astype(int)
    o4 = orient2d_many(C, D, B).astype(int)
    return int(np.sum((o1 * o2 < 0) & (o3 * o4 < 0)))


# ------------------------------------------------------------ exact tours

def _held_karp(C: np.ndarray) -> float:
    n = len(C)
    if n < 3 or n > 15:
        raise ValueError(f"exact tours need 3 <= n <= 15 points, got {n}")
    m = n - 1  # city 0 is the fixed start
    full = 1 << m
    dp = np.full((full, m), np.inf)
    for j in range(m):
        dp[1 << j, j] = C[0, j + 1]
    W = C[1:, 1:]
    bits = np.array([1 << j for j in range(m)])
    for mask in range(1, full):
        row = dp[mask]
        if not np.isfinite(row).any():
            continue
        # extend to every city not yet in mask
        free = (mask & bits) == 0
        if not free.any():
            continue
        cand = (row[:, None] + W).min(axis=0)
        for j in np.flatnonzero(free):
            nm = mask | int(bits[j])
            if cand[j] < dp[nm, j]:
                dp[nm, j] = cand[j]
    return float((dp[full - 1] + C[1:, 0]).min())


def held_karp_euclidean(sites) -> float:
    """Optimal closed tour length through ``sites`` (3 to 15 points)."""
    P = np.asarray(sites, dtype=float).reshape(-1, 2)
    C = np.hypot(P[:, None, 0] - P[None, :, 0], P[:, None, 1] - P[None, :, 1])
    return _held_karp(C)


def held_karp_metric(spanner, sites=None, site_map=None) -> float:
    """Optimal tour when site-to-site costs are spanner shortest paths.

    ``sites`` selects site indices (default: all sites).
    """
    graph, smap = _split_graph(spanner, site_map)
    idx = np.arange(len(smap)) if sites is None else np.asarray(sites, dtype=np.int64)
    if not 3 <= len(idx) <= 15:
        raise ValueError(f"exact tours need 3 <= n <= 15 points, got {len(idx)}")
    check_connected(graph, smap[idx])
    D = dijkstra(graph.csr(), directed=False, indices=smap[idx])[:, smap[idx]]
    return _held_karp(D)


def brute_force_tour(sites) -> float:
    P = np.asarray(sites, dtype=float).reshape(-1, 2)
    n = len(P)
    best = math.inf
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        tour = (0,) + perm + (0,)
        best = min(best, math.fsum(math.hypot(*(P[tour[i + 1]] - P[tour[i]])) for i in range(n)))
    return best


# --------------------------------------------------- triangulation oracles

def brute_force_delaunay(sites) -> list[tuple[int, int, int]]:
    """All ccw triples whose circumcircle has no site strictly inside.

    Only meaningful for sites without four cocircular points.
    """
    P = np.asarray(sites, dtype=float)
    T = np.array(list(itertools.combinations(range(len(P)), 3)), dtype=np.int64)
    o = orient2d_many(P[T[:, 0]], P[T[:, 1]], P[T[:, 2]])
    T = T[o != 0]
    cw = o[o != 0] < 0
    T[cw] = T[cw][:, [0, 2, 1]]
    out = []
    for s in range(0, len(T), 4096):
        t = T[s:s + 4096]
        sign = incircle_many(P[t[:, 0]][:, None], P[t[:, 1]][:, None], P[t[:, 2]][:, None], P[None])
        out.append(t[~(sign > 0).any(axis=1)])
    res = []
    for a, b, c in np.concatenate(out).tolist():
        k = [a, b, c].index(min(a, b, c))
        res.append(tuple(([a, b, c] * 2)[k:k + 3]))
    return sorted(res)


def complete_graph_mst_weight(sites) -> float:
    P = np.asarray(sites, dtype=float)
    D = np.hypot(P[:, None, 0] - P[None, :, 0], P[:, None, 1] - P[None, :, 1])
    T = minimum_spanning_tree(D)
    return math.fsum(T.data.tolist())


def coverage_by_degree(T: Triangulation, x) -> int:
    """Circumdisk coverage of ``x`` recovered from its degree after insertion.

    Inserting x removes exactly the triangles whose circumdisks contain it.
    Their union is a polygon with one more vertex than it has triangles, plus
    one per hull edge visible from x when x is outside the hull, and x ends up
    adjacent to all of those vertices.
    """
    P = T.coords
    Q = np.vstack([P, np.asarray(x, dtype=float)[None]])
    T2 = build_delaunay(Q)
    xi = len(P)
    deg = T2.degree(xi)
    visible = 0
    for (u, v), ts in T.edges.items():
        if len(ts) == 1:
            a, b, c = T.triangles[ts[0]]
            w = ({a, b, c} - {u, v}).pop()
            side_w = orient2d(P[u], P[v], P[w])
            side_x = orient2d(P[u], P[v], x)
            if side_x != 0 and side_x == -side_w:
                visible += 1
    return deg - 1 - visible if visible else deg - 2


# ----------------------------------------------------------------- report

@dataclass
class VerificationReport:
    eps: float
    pairs: str
    seed: int
    max_dilation: float
    dilation_pair: list[int]
    is_plane: bool
    crossing: list[int] | None
    weight_ratio: float
    n_vertices: int
    n_edges: int
    lemma1_holds: bool
    lemma2_max_coverage: int
    lemma2_bound: float
    tsp: dict | None = None
    disconnected_site: int | None = None

    @property
    def passed(self) -> bool:
        ok = self.disconnected_site is None and self.is_plane and self.lemma1_holds
        ok = ok and self.max_dilation <= 1.0 + self.eps
        ok = ok and self.lemma2_max_coverage <= self.lemma2_bound
        if self.tsp is not None:
            ok = ok and 1.0 <= self.tsp["ratio"] <= 1.0 + self.eps
        return ok

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        if not math.isfinite(d["max_dilation"]):
            d["max_dilation"] = None  # disconnected; JSON has no infinity
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def verify(graph: PlanarGraph, site_map, eps: float, pairs: str = "all", k: int = 1000,
           seed: int = 0, coverage_samples: int = 10000, tsp: bool | None = None) -> VerificationReport:
    """Run every check on an embedded graph and its sites."""
    sites = np.asarray(site_map, dtype=np.int64)
    S = graph.vertices[sites]
    T = build_delaunay(S)
    alpha = sharpest_angle(T)
    l1 = lemma1_check(T)
    lo, hi = S.min(0), S.max(0)
    rng = np.random.default_rng(seed)
    X = lo + rng.random((coverage_samples, 2)) * (hi - lo)
    cov = int(circumdisk_coverage_many(X, T).max()) if coverage_samples else 0
    plane = check_plane(graph)
    base = dict(eps=eps, pairs=pairs, seed=seed, is_plane=plane.is_plane,
                crossing=list(plane.witness) if plane.witness else None,
                weight_ratio=graph.total_length / l1.mst_weight,
                n_vertices=graph.n_vertices, n_edges=graph.n_edges,
                lemma1_holds=bool(l1.holds), lemma2_max_coverage=cov,
                lemma2_bound=math.floor(coverage_bound(alpha)))
    try:
        dil = max_dilation(graph, pairs, k=k, seed=seed, site_map=sites)
    except DisconnectedError as exc:
        return VerificationReport(max_dilation=math.inf, dilation_pair=[0, exc.site],
                                  disconnected_site=exc.site, **base)
    tour = None
    if tsp is None:
        tsp = 3 <= len(sites) <= 12
    if tsp and len(sites) >= 3:
        e = held_karp_euclidean(S)
        m = held_karp_metric(graph, site_map=sites)
        tour = {"euclid_opt": e, "spanner_opt": m, "ratio": m / e}
    return VerificationReport(max_dilation=dil.ratio, dilation_pair=list(dil.pair), tsp=tour, **base)
