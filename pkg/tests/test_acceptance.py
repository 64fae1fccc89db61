"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are
printed even when output capture is on.
"""

from __future__ import annotations

import json
import math
import time

import numpy as np
import pytest

from steinerspan.arrangement import planarize
from steinerspan.cli import main
from steinerspan.generators import generate
from steinerspan.portals import chord_portal_distances, place_portals
from steinerspan.spanner import build_spanner
from steinerspan.triangulation import (
    build_delaunay,
    circumdisk_coverage_many,
    coverage_bound,
    dt_weight,
    euclidean_mst,
    lemma1_check,
    sharpest_angle,
)
from steinerspan.verify import (
    brute_force_delaunay,
    check_plane,
    complete_graph_mst_weight,
    coverage_by_degree,
    held_karp_euclidean,
    held_karp_metric,
    max_dilation,
    proper_crossing_count,
)
from steinerspan.wedges import (
    BoundaryPoint,
    ConvexPolygon,
    build_wedges,
    is_extreme,
    path_length,
    trace_path,
    wedge_length_bound,
)

pytestmark = pytest.mark.slow

EPS = (0.5, 0.25, 0.1)
POINT_SETS = {
    "grid-jitter n=100": ("grid-jitter", 100, {"jitter": 0.2}),
    "poisson-disk n=100": ("poisson-disk", 100, {}),
    "poisson-disk n=400": ("poisson-disk", 400, {}),
}


@pytest.fixture
def say(capsys):
    def emit(criterion: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[criterion {criterion:2d}] {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return emit


@pytest.fixture(scope="module")
def grid_runs():
    """Spanner and all-pairs dilation for every (point set, eps) cell."""
    out = {}
    for name, (kind, n, params) in POINT_SETS.items():
        P = generate(kind, n, seed=0, **params)
        for eps in EPS:
            t0 = time.perf_counter()
            sp = build_spanner(P, eps)
            d = max_dilation(sp, pairs="all")
            out[name, eps] = (sp, d, time.perf_counter() - t0)
    return out


def test_criterion_01_dilation(grid_runs, say):
    bad = []
    lines = []
    for (name, eps), (sp, d, secs) in grid_runs.items():
        ok = d.ratio <= 1 + eps and secs < 60
        lines.append(f"{name} eps={eps}: dilation {d.ratio:.4f} in {secs:.1f}s "
                     f"({sp.graph.n_vertices} vertices)")
        if not ok:
            bad.append(lines[-1])
    ok = say(1, not bad, "; ".join(lines))
    assert ok, bad


def test_criterion_02_plane(grid_runs, say):
    bad = []
    for (name, eps), (sp, _, _) in grid_runs.items():
        r = check_plane(sp.graph)
        if not r.is_plane:
            bad.append((name, eps, r.witness))
    ok = say(2, not bad, f"{len(grid_runs)} spanners checked, {len(bad)} non-plane")
    assert ok, bad


def test_criterion_03_lemma1(say):
    violations, sums_off, worst = 0, 0, 0.0
    for seed in range(100):
        P = generate("uniform", 50, seed=seed)
        T = build_delaunay(P)
        r = lemma1_check(T)
        violations += not r.holds
        worst = max(worst, r.dt_weight / (r.fw * r.mst_weight))
        # independent length sums
        exact_dt = math.fsum(math.dist(P[u], P[v]) for u, v in T.edges)
        exact_mst = math.fsum(math.dist(P[u], P[v]) for u, v in euclidean_mst(T).edges)
        sums_off += not (math.isclose(dt_weight(T), exact_dt, rel_tol=1e-9)
                         and math.isclose(r.mst_weight, exact_mst, rel_tol=1e-9))
    ok = say(3, violations == 0 and sums_off == 0,
             f"100 instances: {violations} violations, {sums_off} sum mismatches, "
             f"max w(DT)/bound = {worst:.3f}")
    assert ok


def test_criterion_04_coverage(say):
    over, mismatch, checked = 0, 0, 0
    worst = 0.0
    for seed in range(10):
        P = generate("uniform", 50, seed=seed)
        T = build_delaunay(P)
        alpha = sharpest_angle(T)
        cap = math.floor(coverage_bound(alpha))
        rng = np.random.default_rng(1000 + seed)
        lo, hi = P.min(0), P.max(0)
        span = hi - lo
        X = lo - 0.1 * span + rng.random((10_000, 2)) * 1.2 * span
        cov = circumdisk_coverage_many(X, T)
        over += int(np.sum(cov > cap))
        worst = max(worst, cov.max() / cap)
        for i in range(100):
            checked += 1
            mismatch += coverage_by_degree(T, X[i]) != cov[i]
    ok = say(4, over == 0 and mismatch == 0,
             f"10 instances x 10^4 queries: {over} above floor(2pi/alpha) (max ratio {worst:.2f}); "
             f"{mismatch}/{checked} degree-oracle mismatches")
    assert ok


def _chords(rng, m):
    """Random circles through (0,0), (1,0) and chords crossing that edge.

    Half the chords have an end close to an edge endpoint (log-uniform arc
    offsets), where the portal spacing is finest.
    """
    h = np.tan(rng.uniform(-1.5, 1.5, m))
    r = np.hypot(0.5, h)
    a0 = np.arctan2(-h, -0.5)
    a1 = np.arctan2(-h, 0.5)
    span = (a1 - a0) % (2 * np.pi)
    u, v = rng.random(m), rng.random(m)
    near = rng.random(m) < 0.5
    tiny = 10.0 ** rng.uniform(-6, 0, (2, m))
    u = np.where(near, tiny[0], u)
    v = np.where(near, tiny[1], v)
    flip = rng.random(m) < 0.5
    te = np.where(flip, a1 - u * span, a0 + u * span)
    tf = np.where(flip, a1 + v * (2 * np.pi - span), a0 - v * (2 * np.pi - span))
    c = np.stack([np.full(m, 0.5), h], axis=1)
    E = c + r[:, None] * np.stack([np.cos(te), np.sin(te)], axis=1)
    F = c + r[:, None] * np.stack([np.cos(tf), np.sin(tf)], axis=1)
    return E, F


def test_criterion_05_portals(say):
    # the claim is invariant under similarities, so the edge is fixed to
    # (0,0)-(1,0) and circle and chord vary
    rng = np.random.default_rng(5)
    parts = []
    total_bad = 0
    for eps_p in (0.05, 0.1, 0.2):
        E, F = _chords(rng, 100_000)
        ps = place_portals(((0.0, 0.0), (1.0, 0.0)), eps_p)
        d = chord_portal_distances(ps, E, F)
        ratio = d / np.hypot(*(F - E).T)
        bad = int(np.sum(ratio > eps_p))
        total_bad += bad
        parts.append(f"eps_p={eps_p}: {bad} violations, max d/|t| = {ratio.max():.4f}")
    ok = say(5, total_bad == 0, "; ".join(parts))
    assert ok


def _spaced(K, n):
    lens = [math.dist(*K.edge(i)) for i in range(len(K))]
    per = sum(lens)
    out = []
    for k in range(n):
        s = per * k / n
        i = 0
        while s >= lens[i]:
            s -= lens[i]
            i += 1
        out.append(BoundaryPoint.on(K, i, s / lens[i]))
    return out


def _wedge_fit(K, delta, check_paths=True):
    """Direction-averaged constant C_n = total / ((l ln n) / delta) for
    n in {8, 64, 512}, over the directions 2 * delta * i the spanner uses.
    Also counts traced paths longer than dist / cos(delta)."""
    k = round(math.pi / delta)
    Cs, paths, too_long = [], 0, 0
    for n in (8, 64, 512):
        P = _spaced(K, n)
        total = 0.0
        for i in range(k):
            theta = 2 * delta * i
            S = build_wedges(K, P, theta, delta)
            total += S.total_length
            if not check_paths:
                continue
            for j, bp in enumerate(P):
                if is_extreme(K, bp.edge, bp.t, theta, delta):
                    continue
                if j in S.order and not S.segments_from(j):
                    continue  # corner narrower than the cone
                p = trace_path(j, S)
                paths += 1
                if path_length(p) > math.dist(p[0], p[-1]) / math.cos(delta) * (1 + 1e-9):
                    too_long += 1
        Cs.append(total / k / wedge_length_bound(K.perimeter, n, delta))
    return max(Cs) / min(Cs), paths, too_long


def test_criterion_06_wedges(say):
    # half-angles the spanner uses at eps = 0.5, 0.25, 0.1
    deltas = (math.pi / 4, math.pi / 6, math.pi / 9)
    shapes = {"square": ConvexPolygon([(0, 0), (1, 0), (1, 1), (0, 1)]),
              "triangle": ConvexPolygon([(0, 0), (1, 0), (0.3, 0.9)]),
              "equilateral": ConvexPolygon([(0, 0), (1, 0), (0.5, math.sqrt(3) / 2)])}
    paths, too_long, fits = 0, 0, []
    for sname, K in shapes.items():
        for delta in deltas:
            spread, p, bad = _wedge_fit(K, delta)
            paths += p
            too_long += bad
            fits.append(f"{sname}/{delta:.3f}:{spread:.2f}")
    worst = max(float(f.split(":")[1]) for f in fits)
    # informational: at delta = 0.1 the n = 8 systems are too sparse for the
    # asymptotic shape (every segment is capped by the polygon's width)
    small = _wedge_fit(shapes["square"], math.pi / 31, check_paths=False)[0]
    ok = say(6, too_long == 0 and worst <= 2,
             f"{paths} paths, {too_long} longer than dist/cos(delta); C spread over "
             f"n in {{8,64,512}}: max {worst:.2f} ({' '.join(fits)}); "
             f"square at delta=pi/31 (not part of the check): {small:.2f}")
    assert ok


def test_criterion_07_scaling(say):
    P = generate("poisson-disk", 100, seed=0)
    V, W, bv, bw = [], [], [], []
    for eps in (0.5, 0.35, 0.25, 0.15, 0.1):
        sp = build_spanner(P, eps)
        a, b = sp.config.alpha, sp.config.beta
        V.append(sp.graph.n_vertices)
        W.append(sp.stats["weight_ratio"])
        bv.append(b * b / eps * len(P))
        bw.append(b / a)
    sv = np.polyfit(np.log(bv), np.log(V), 1)[0]
    sw = np.polyfit(np.log(bw), np.log(W), 1)[0]
    ok = say(7, sv <= 1.15 and sw <= 1.15,
             f"log-log slope: vertices vs beta^2 n/eps = {sv:.3f}, weight ratio vs beta/alpha = {sw:.3f}")
    assert ok


def test_criterion_08_tsp(say):
    t0 = time.perf_counter()
    ratios = []
    for k in range(20):
        n = (8, 10, 12)[k % 3]
        P = generate("uniform", n, seed=100 + k)
        sp = build_spanner(P, 0.25)
        ratios.append(held_karp_metric(sp) / held_karp_euclidean(P))
    secs = time.perf_counter() - t0
    ok = say(8, max(ratios) <= 1.25 and min(ratios) >= 1 - 1e-12 and secs < 60,
             f"20 instances: ratio in [{min(ratios):.4f}, {max(ratios):.4f}], {secs:.1f}s")
    assert ok


def _rotated(t):
    k = t.index(min(t))
    return tuple(t[k:]) + tuple(t[:k])


def test_criterion_09_oracles(say):
    dt_bad = 0
    for seed in range(20):
        P = generate("uniform", 40, seed=200 + seed)
        T = build_delaunay(P)
        dt_bad += sorted(_rotated(t) for t in T.triangles) != brute_force_delaunay(P)
    mst_bad = 0
    for seed in range(20):
        P = generate("uniform", 30, seed=300 + seed)
        w = euclidean_mst(build_delaunay(P)).weight
        mst_bad += not math.isclose(w, complete_graph_mst_weight(P), rel_tol=1e-12)
    soup_bad = 0
    rng = np.random.default_rng(9)
    for _ in range(50):
        m = int(rng.integers(2, 51))
        S = rng.random((m, 2, 2))
        g = planarize(S)
        soup_bad += g.n_vertices != 2 * m + proper_crossing_count(S)
    ok = say(9, dt_bad == mst_bad == soup_bad == 0,
             f"Delaunay {dt_bad}/20, MST {mst_bad}/20, planarize {soup_bad}/50 mismatches")
    assert ok


def test_criterion_10_determinism(tmp_path, capsys, say):
    pts = tmp_path / "pts.txt"
    assert main(["gen", "poisson-disk", "-n", "100", "--seed", "7", "-o", str(pts)]) == 0
    docs, reps = [], []
    for threads in (1, 8):
        doc = tmp_path / f"sp{threads}.json"
        rep = tmp_path / f"rep{threads}.json"
        assert main(["build", str(pts), "--eps", "0.25", "-o", str(doc),
                     "--threads", str(threads), "--seed", "3"]) == 0
        assert main(["verify", str(pts), str(doc), "--eps", "0.25", "--report", str(rep),
                     "--seed", "3", "--threads", str(threads)]) == 0
        docs.append(doc.read_bytes())
        reps.append(rep.read_bytes())
    capsys.readouterr()
    same = docs[0] == docs[1] and reps[0] == reps[1]
    ok = say(10, same, f"document {len(docs[0])} bytes, report {len(reps[0])} bytes, "
             f"identical: {same} (max dilation {json.loads(reps[0])['max_dilation']:.4f})")
    assert ok
