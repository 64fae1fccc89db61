"""Straight-line planar graphs and segment arrangements."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree


@dataclass(eq=False)
class PlanarGraph:
    """Embedded graph: vertex coordinates (V, 2) and undirected edges (E, 2)."""

    vertices: np.ndarray
    edges: np.ndarray
    _adj: list | None = field(default=None, repr=False)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        self.edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def lengths(self) -> np.ndarray:
        d = self.vertices[self.edges[:, 1]] - self.vertices[self.edges[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    @property
    def total_length(self) -> float:
        return float(np.sum(np.sort(self.lengths)))

    @property
    def adjacency(self) -> list[list[int]]:
        if self._adj is None:
            adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
            for u, v in self.edges.tolist():
                adj[u].append(v)
                adj[v].append(u)
            self._adj = adj
        return self._adj

    def csr(self) -> csr_matrix:
        """Symmetric sparse matrix of edge lengths."""
        E, w, n = self.edges, self.lengths, self.n_vertices
        rows = np.concatenate([E[:, 0], E[:, 1]])
        cols = np.concatenate([E[:, 1], E[:, 0]])
        return coo_matrix((np.concatenate([w, w]), (rows, cols)), shape=(n, n)).tocsr()

    def segments(self) -> np.ndarray:
        return self.vertices[self.edges]


@dataclass(eq=False)
class Arrangement:
    """Planarized segments plus, per input segment, its ordered vertex chain."""

    graph: PlanarGraph
    edge_source: np.ndarray  # input segment each edge came from (lowest index wins)
    chain_seg: np.ndarray
    chain_param: np.ndarray
    chain_vertex: np.ndarray

    def chain(self, seg: int) -> tuple[np.ndarray, np.ndarray]:
        """Vertex ids and parameters along input segment ``seg``."""
        lo, hi = np.searchsorted(self.chain_seg, [seg, seg + 1])
        return self.chain_vertex[lo:hi], self.chain_param[lo:hi]


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def candidate_pairs(lo: np.ndarray, hi: np.ndarray, budget: int = 1 << 22) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs i < j whose boxes [lo, hi] overlap, sorted lexicographically.

    Sort-and-sweep on x: after sorting by lower x, the boxes that can meet box
    k in x are a contiguous run after it. Runs are expanded ``budget`` pairs at
    a time and filtered on y.
    """
    m = len(lo)
    order = np.argsort(lo[:, 0], kind="stable")
    lx = lo[order, 0]
    end = np.searchsorted(lx, hi[order, 0], side="right")
    cnt = np.maximum(end - np.arange(m) - 1, 0)
    cs = np.cumsum(cnt)
    I, J = [], []
    s = 0
    while s < m:
        e = max(int(np.searchsorted(cs, (cs[s - 1] if s else 0) + budget, side="right")), s + 1)
        c = cnt[s:e]
        a = np.repeat(np.arange(s, e), c)
        b = a + 1 + np.arange(len(a)) - np.repeat(np.cumsum(c) - c, c)
        oa, ob = order[a], order[b]
        ok = (lo[oa, 1] <= hi[ob, 1]) & (hi[oa, 1] >= lo[ob, 1]) & (lo[ob, 0] <= hi[oa, 0])
        oa, ob = oa[ok], ob[ok]
        I.append(np.minimum(oa, ob))
        J.append(np.maximum(oa, ob))
        s = e
    if not I:
        return np.zeros(0, np.int64), np.zeros(0, np.int64)
    key = np.sort(np.concatenate(I) * m + np.concatenate(J))
    return key // m, key % m


def arrangement(segments, eta: float) -> Arrangement:
    """Arrangement of closed segments (m, 2, 2).

    Endpoints and pairwise intersections become vertices; points closer than
    ``eta`` are merged, keeping the coordinates of the lowest-numbered one
    (endpoints of earlier segments first). Segments shorter than ``eta`` are
    dropped. Collinear overlaps are split at each other's endpoints so the
    shared pieces collapse into single edges.
    """
    S = np.asarray(segments, dtype=float).reshape(-1, 2, 2)
    A, B = S[:, 0], S[:, 1]
    D = B - A
    L = np.hypot(D[:, 0], D[:, 1])
    keep = L > eta
    m = len(S)

    lo = np.minimum(A, B) - eta
    hi = np.maximum(A, B) + eta
    lo[~keep] = np.inf
    hi[~keep] = -np.inf
    I, J = candidate_pairs(lo, hi)

    split_seg = [np.repeat(np.flatnonzero(keep), 2)]
    split_par = [np.tile([0.0, 1.0], int(keep.sum()))]
    kid = np.flatnonzero(keep)
    split_pid = [np.stack([2 * kid, 2 * kid + 1], axis=1).ravel()]
    new_pts = []
    next_id = 2 * m

    if len(I):
        Ai, Aj, Di, Dj = A[I], A[J], D[I], D[J]
        Li, Lj = L[I], L[J]
        den = _cross(Di[:, 0], Di[:, 1], Dj[:, 0], Dj[:, 1])
        W = Aj - Ai
        ti_tol, tj_tol = eta / Li, eta / Lj
        nonpar = np.abs(den) > 1e-13 * Li * Lj
        with np.errstate(divide="ignore", invalid="ignore"):
            t = _cross(W[:, 0], W[:, 1], Dj[:, 0], Dj[:, 1]) / den
            u = _cross(W[:, 0], W[:, 1], Di[:, 0], Di[:, 1]) / den
        hit = nonpar & (t >= -ti_tol) & (t <= 1 + ti_tol) & (u >= -tj_tol) & (u <= 1 + tj_tol)
        t_end0, t_end1 = np.abs(t) <= ti_tol, np.abs(t - 1) <= ti_tol
        u_end0, u_end1 = np.abs(u) <= tj_tol, np.abs(u - 1) <= tj_tol
        t_end, u_end = t_end0 | t_end1, u_end0 | u_end1

        # i's endpoint touches the interior of j: split j there
        sel = hit & t_end & ~u_end
        split_seg.append(J[sel])
        split_par.append(np.clip(u[sel], 0, 1))
        split_pid.append(2 * I[sel] + t_end1[sel])
        sel = hit & u_end & ~t_end
        split_seg.append(I[sel])
        split_par.append(np.clip(t[sel], 0, 1))
        split_pid.append(2 * J[sel] + u_end1[sel])
        # proper crossings
        sel = np.flatnonzero(hit & ~t_end & ~u_end)
        if len(sel):
            ids = next_id + np.arange(len(sel))
            next_id += len(sel)
            new_pts.append(Ai[sel] + t[sel, None] * Di[sel])
            split_seg += [I[sel], J[sel]]
            split_par += [t[sel], u[sel]]
            split_pid += [ids, ids]

        # collinear overlaps
        par = np.flatnonzero(~nonpar)
        if len(par):
            i, j = I[par], J[par]
            for src, dst in ((j, i), (i, j)):
                for end in (0, 1):
                    P = S[src, end]
                    W2 = P - A[dst]
                    off = np.abs(_cross(D[dst, 0], D[dst, 1], W2[:, 0], W2[:, 1])) / L[dst]
                    s = (W2 * D[dst]).sum(1) / L[dst] ** 2
                    tol = eta / L[dst]
                    ok = (off <= eta) & (s > tol) & (s < 1 - tol)
                    split_seg.append(dst[ok])
                    split_par.append(s[ok])
                    split_pid.append(2 * src[ok] + end)

    pts = np.concatenate([S.reshape(-1, 2)] + new_pts) if new_pts else S.reshape(-1, 2).copy()
    seg = np.concatenate(split_seg)
    prm = np.concatenate(split_par)
    pid = np.concatenate(split_pid)

    # merge points within eta; the representative is the smallest id
    used = np.unique(pid)
    tree = cKDTree(pts[used])
    pairs = tree.query_pairs(eta, output_type="ndarray")
    nu = len(used)
    g = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(nu, nu))
    _, comp = connected_components(g, directed=False)
    # used is sorted, so the first member of each component has the smallest id
    first = np.full(comp.max() + 1 if nu else 0, nu)
    np.minimum.at(first, comp, np.arange(nu))
    # vertex numbering in order of representative id
    reps = np.unique(first)
    vid_of_rep = np.full(nu, -1)
    vid_of_rep[reps] = np.arange(len(reps))
    local = np.searchsorted(used, pid)
    vid = vid_of_rep[first[comp[local]]]
    verts = pts[used[reps]]

    order = np.lexsort((prm, seg))
    seg, prm, vid = seg[order], prm[order], vid[order]
    same = (seg[1:] == seg[:-1]) & (vid[1:] != vid[:-1])
    eu, ev, es = vid[:-1][same], vid[1:][same], seg[:-1][same]
    lo_v, hi_v = np.minimum(eu, ev), np.maximum(eu, ev)
    key = lo_v * len(verts) + hi_v
    _, first_idx = np.unique(key, return_index=True)
    first_idx.sort()
    edges = np.stack([lo_v[first_idx], hi_v[first_idx]], axis=1)
    return Arrangement(PlanarGraph(verts, edges), es[first_idx], seg, prm, vid)


def planarize(segments, eta: float | None = None) -> PlanarGraph:
    """Planar graph of the arrangement of ``segments``.

    ``eta`` defaults to 1e-9 times the bounding-box diagonal of the input.
    """
    S = np.asarray(segments, dtype=float).reshape(-1, 2, 2)
    if len(S) == 0:
        return PlanarGraph(np.zeros((0, 2)), np.zeros((0, 2), np.int64))
    if eta is None:
        pts = S.reshape(-1, 2)
        diag = float(np.hypot(*(pts.max(0) - pts.min(0))))
        eta = 1e-9 * (diag if diag > 0 else 1.0)
    return arrangement(S, eta).graph
