"""Seeded point-set generators with controllable Delaunay angles."""

from __future__ import annotations

import math

import numpy as np

KINDS = ("grid-jitter", "poisson-disk", "uniform")


def grid_jitter(n: int, seed: int = 0, jitter: float = 0.0) -> np.ndarray:
    """Square grid of ``round(sqrt(n))**2`` unit-spaced points.

    Every coordinate is displaced by a uniform amount in
    ``[-jitter / 2, jitter / 2]``; ``jitter = 0`` gives exact integer points.
    Points on the sides of the square only move along their side and the
    corners stay put, which keeps sliver triangles off the hull.
    """
    k = max(2, int(round(math.sqrt(n))))
    if jitter < 0 or jitter >= 1:
        raise ValueError("jitter must lie in [0, 1)")
    ii, jj = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    pts = np.stack([ii.ravel(), jj.ravel()], axis=1).astype(float)
    if jitter > 0:
        rng = np.random.default_rng(seed)
        shift = rng.uniform(-jitter / 2, jitter / 2, size=pts.shape)
        on_side = (pts == 0) | (pts == k - 1)
        shift[on_side] = 0.0
        pts += shift
    return pts


def uniform(n: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).random((n, 2))


def poisson_radius(n: int) -> float:
    """Disk radius giving roughly ``n`` points in the unit square.

    Fitted count model: n ~ 0.579 / r**2 + 3.1 / r (interior plus sides).
    """
    a, b = 0.579, 3.1
    return 2 * a / (math.sqrt(b * b + 4 * a * n) - b)


def poisson_disk(n: int, seed: int = 0, radius: float | None = None, k: int = 30) -> np.ndarray:
    """Bridson blue-noise sample of the unit square.

    The square's sides are first sampled at spacing close to ``radius`` so the
    hull has no sliver triangles, then the interior is filled until no
    candidate fits. The count is approximately ``n``.
    """
    r = poisson_radius(n) if radius is None else float(radius)
    rng = np.random.default_rng(seed)
    cell = r / math.sqrt(2)
    gw = int(math.ceil(1.0 / cell)) + 1
    grid = -np.ones((gw, gw), dtype=np.int64)
    pts: list[tuple[float, float]] = []

    def fits(x, y) -> bool:
        gx, gy = int(x / cell), int(y / cell)
        for i in range(max(gx - 2, 0), min(gx + 3, gw)):
            for j in range(max(gy - 2, 0), min(gy + 3, gw)):
                q = grid[i, j]
                if q >= 0:
                    px, py = pts[q]
                    if (px - x) ** 2 + (py - y) ** 2 < r * r:
                        return False
        return True

    def add(x, y):
        grid[int(x / cell), int(y / cell)] = len(pts)
        pts.append((x, y))

    m = max(1, int(math.floor(1.0 / r)))
    side = [i / m for i in range(m)]
    for s in side:
        for x, y in ((s, 0.0), (1.0, s), (1.0 - s, 1.0), (0.0, 1.0 - s)):
            add(x, y)
    active = list(range(len(pts)))
    while active:
        idx = int(rng.integers(len(active)))
        px, py = pts[active[idx]]
        for _ in range(k):
            rho = r * math.sqrt(1.0 + 3.0 * rng.random())
            phi = 2.0 * math.pi * rng.random()
            x, y = px + rho * math.cos(phi), py + rho * math.sin(phi)
            if 0.0 < x < 1.0 and 0.0 < y < 1.0 and fits(x, y):
                add(x, y)
                active.append(len(pts) - 1)
                break
        else:
            active[idx] = active[-1]
            active.pop()
    return np.array(pts)


def generate(kind: str, n: int, seed: int = 0, **params) -> np.ndarray:
    if n < 3:
        raise ValueError("n must be at least 3")
    if kind == "grid-jitter":
        return grid_jitter(n, seed, jitter=params.get("jitter", 0.0))
    if kind == "poisson-disk":
        return poisson_disk(n, seed, radius=params.get("radius"))
    if kind == "uniform":
        return uniform(n, seed)
    raise ValueError(f"unknown generator {kind!r}; expected one of {KINDS}")
