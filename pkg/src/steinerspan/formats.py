"""Point files, triangulation files, spanner documents and SVG output."""

from __future__ import annotations

import json
import math

import numpy as np

from .arrangement import PlanarGraph
from .triangulation import InputError

FORMAT = "steiner-spanner/1"


class DocumentError(InputError):
    def __init__(self, msg: str):
        super().__init__("bad-document", msg)


def format_float(x: float) -> str:
    # 17 significant digits round-trip every binary64 value
    return "%.17g" % x


def render_points(points) -> str:
    return "".join(f"{format_float(x)} {format_float(y)}\n" for x, y in np.asarray(points, dtype=float))


def parse_points(text: str) -> np.ndarray:
    pts = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise InputError("bad-point-file", f"line {lineno}: expected 'x y', got {line!r}")
        try:
            x, y = float(parts[0]), float(parts[1])
        except ValueError:
            raise InputError("bad-point-file", f"line {lineno}: not a number: {line!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise InputError("bad-point-file", f"line {lineno}: non-finite coordinate")
        pts.append((x, y))
    return np.array(pts, dtype=float).reshape(-1, 2)


def read_points(path) -> np.ndarray:
    with open(path) as fh:
        return parse_points(fh.read())


def write_points(path, points) -> None:
    with open(path, "w") as fh:
        fh.write(render_points(points))


def parse_triangles(text: str) -> list[tuple[int, int, int]]:
    """One triangle per line: three zero-based site indices."""
    tris = []
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 3:
            raise InputError("bad-triangle-file", f"line {lineno}: expected three indices")
        try:
            tris.append(tuple(int(p) for p in parts))
        except ValueError:
            raise InputError("bad-triangle-file", f"line {lineno}: not an integer: {line!r}") from None
    return tris


def read_triangles(path) -> list[tuple[int, int, int]]:
    with open(path) as fh:
        return parse_triangles(fh.read())


def _plain(v):
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def spanner_document(spanner) -> dict:
    cfg = spanner.config
    return {
        "format": FORMAT,
        "config": {"eps": cfg.eps, "alpha": cfg.alpha, "eps_p": cfg.eps_p,
                   "delta": cfg.wedge_half_angle, "seed": cfg.seed},
        "vertices": spanner.graph.vertices.tolist(),
        "edges": spanner.graph.edges.tolist(),
        "sites": [int(s) for s in spanner.site_map],
        "stats": _plain(spanner.stats),
    }


def dumps(doc: dict) -> str:
    """Deterministic JSON text (floats use the shortest round-trip repr)."""
    return json.dumps(_plain(doc), sort_keys=True, separators=(",", ":")) + "\n"


def write_document(path, doc: dict) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(doc))


def validate_document(doc) -> tuple[PlanarGraph, np.ndarray]:
    if not isinstance(doc, dict):
        raise DocumentError("document is not a JSON object")
    if doc.get("format") != FORMAT:
        raise DocumentError(f"format must be {FORMAT!r}")
    for key in ("config", "vertices", "edges", "sites", "stats"):
        if key not in doc:
            raise DocumentError(f"missing field {key!r}")
    try:
        V = np.array(doc["vertices"], dtype=float).reshape(-1, 2)
        E = np.array(doc["edges"], dtype=np.int64).reshape(-1, 2)
        S = np.array(doc["sites"], dtype=np.int64).reshape(-1)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"malformed arrays: {exc}") from None
    if len(doc["vertices"]) and np.shape(doc["vertices"])[1:] != (2,):
        raise DocumentError("vertices must be [x, y] pairs")
    if not np.isfinite(V).all():
        raise DocumentError("non-finite vertex coordinate")
    n = len(V)
    if len(E) and (E.min() < 0 or E.max() >= n):
        raise DocumentError("edge index out of range")
    if len(E) and (E[:, 0] == E[:, 1]).any():
        raise DocumentError("self-loop edge")
    if len(S) and (S.min() < 0 or S.max() >= n):
        raise DocumentError("site index out of range")
    if len(np.unique(S)) != len(S):
        raise DocumentError("site map is not injective")
    st = doc["stats"]
    if not isinstance(st, dict):
        raise DocumentError("stats must be an object")
    g = PlanarGraph(V, E)
    for key, value in (("n_vertices", n), ("n_edges", len(E)), ("n_sites", len(S))):
        if key in st and st[key] != value:
            raise DocumentError(f"stats.{key} = {st[key]} disagrees with the graph ({value})")
    if "total_weight" in st and not math.isclose(st["total_weight"], g.total_length, rel_tol=1e-9, abs_tol=1e-12):
        raise DocumentError("stats.total_weight disagrees with the graph")
    return g, S


def read_document(path) -> tuple[dict, PlanarGraph, np.ndarray]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not JSON: {exc}") from None
    g, S = validate_document(doc)
    return doc, g, S


def render_svg(graph: PlanarGraph, sites, overlay=None, width: float = 800.0, margin: float = 0.05) -> str:
    """SVG drawing: edges as polylines, sites as squares, Steiner vertices as dots.

    The view box is the bounding box of all points plus ``margin`` times its
    larger side on every side; the y axis points up.
    """
    V = graph.vertices
    sites = np.asarray(sites, dtype=np.int64)
    pts = [V] + ([np.asarray(overlay, dtype=float).reshape(-1, 2)] if overlay is not None else [])
    allp = np.concatenate(pts) if sum(len(p) for p in pts) else np.zeros((1, 2))
    lo, hi = allp.min(0), allp.max(0)
    span = float(max(hi - lo)) or 1.0
    m = margin * span
    x0, y0 = lo[0] - m, lo[1] - m
    w, h = hi[0] - lo[0] + 2 * m, hi[1] - lo[1] + 2 * m
    f = format_float
    scale = span / 800.0
    out = ['<?xml version="1.0" encoding="UTF-8"?>\n',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:g}" '
           f'height="{width * h / w:.6g}" viewBox="{f(x0)} {f(-(y0 + h))} {f(w)} {f(h)}">\n',
           '<g transform="scale(1,-1)">\n',
           f'<g fill="none" stroke="#333333" stroke-width="{f(scale)}">\n']
    for u, v in graph.edges.tolist():
        out.append(f'<polyline points="{f(V[u, 0])},{f(V[u, 1])} {f(V[v, 0])},{f(V[v, 1])}"/>\n')
    out.append("</g>\n")
    is_site = np.zeros(len(V), dtype=bool)
    is_site[sites] = True
    r = 1.5 * scale
    out.append('<g fill="#1f77b4">\n')
    for x, y in V[~is_site].tolist():
        out.append(f'<circle cx="{f(x)}" cy="{f(y)}" r="{f(r)}"/>\n')
    out.append("</g>\n")
    s = 5 * scale
    out.append('<g fill="#d62728" stroke="black" stroke-width="%s">\n' % f(scale / 2))
    for x, y in V[sites].tolist():
        out.append(f'<rect x="{f(x - s)}" y="{f(y - s)}" width="{f(2 * s)}" height="{f(2 * s)}"/>\n')
    out.append("</g>\n")
    if overlay is not None:
        out.append('<g fill="none" stroke="#2ca02c" stroke-width="%s">\n' % f(scale))
        for x, y in np.asarray(overlay, dtype=float).reshape(-1, 2).tolist():
            out.append(f'<circle cx="{f(x)}" cy="{f(y)}" r="{f(2 * s)}"/>\n')
        out.append("</g>\n")
    out.append("</g>\n</svg>\n")
    return "".join(out)
