"""Command line: gen, build, verify, stats, render."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import formats
from .generators import KINDS, generate
from .portals import ParameterError
from .spanner import PRESETS, TooSharpError, build_spanner
from .triangulation import InputError, build_delaunay, sharpest_angle, triangulation_from_triangles
from .verify import verify

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_PARAM = 0, 1, 2, 3


def _threads(v) -> int:
    return v if v else (os.cpu_count() or 1)


def cmd_gen(args) -> int:
    params = {}
    if args.jitter is not None:
        params["jitter"] = args.jitter
    if args.radius is not None:
        params["radius"] = args.radius
    try:
        pts = generate(args.kind, args.n, args.seed, **params)
    except ValueError as exc:
        raise ParameterError(str(exc)) from None
    alpha = sharpest_angle(build_delaunay(pts))
    text = formats.render_points(pts)
    header = f"# {args.kind} n={len(pts)} seed={args.seed}\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(header + text)
    else:
        sys.stdout.write(header + text)
    print(f"points: {len(pts)}  alpha: {alpha:.6f} rad", file=sys.stderr if not args.output else sys.stdout)
    return EXIT_OK


def _snap(pts: np.ndarray, g: float) -> np.ndarray:
    if g <= 0:
        raise ParameterError("--snap-grid must be positive")
    return np.round(pts / g) * g


def cmd_build(args) -> int:
    pts = formats.read_points(args.input)
    if args.snap_grid is not None:
        pts = _snap(pts, args.snap_grid)
    dt = None
    if args.dt_file:
        dt = triangulation_from_triangles(pts, formats.read_triangles(args.dt_file))
    sp = build_spanner(pts, args.eps, dt=dt, constants=PRESETS[args.constants],
                       threads=_threads(args.threads), seed=args.seed)
    formats.write_document(args.output, formats.spanner_document(sp))
    if args.stats:
        with open(args.stats, "w") as fh:
            fh.write(formats.dumps(sp.stats))
    print(f"vertices: {sp.graph.n_vertices}  edges: {sp.graph.n_edges}  "
          f"weight/MST: {sp.stats['weight_ratio']:.3f}")
    return EXIT_OK


def cmd_verify(args) -> int:
    pts = formats.read_points(args.points)
    doc, g, S = formats.read_document(args.spanner)
    if len(S) != len(pts) or not np.array_equal(g.vertices[S], pts):
        raise InputError("site-mismatch", "spanner sites do not match the point file")
    if not 0 < args.eps < 1:
        raise ParameterError("eps must lie in (0, 1)")
    rep = verify(g, S, args.eps, pairs=args.pairs, k=args.k, seed=args.seed,
                 coverage_samples=args.coverage_samples, tsp=args.tsp)
    text = rep.to_json()
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    if rep.disconnected_site is not None:
        print(f"site {rep.disconnected_site} is disconnected", file=sys.stderr)
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_stats(args) -> int:
    doc, g, S = formats.read_document(args.spanner)
    deg = np.bincount(g.edges.ravel(), minlength=g.n_vertices) if g.n_edges else np.zeros(g.n_vertices, int)
    out = {"n_vertices": g.n_vertices, "n_edges": g.n_edges, "n_sites": len(S),
           "n_steiner": g.n_vertices - len(S), "total_weight": g.total_length,
           "max_degree": int(deg.max()) if len(deg) else 0}
    out.update({k: v for k, v in doc["stats"].items() if k not in out})
    sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_render(args) -> int:
    doc, g, S = formats.read_document(args.spanner)
    overlay = formats.read_points(args.points) if args.points else None
    with open(args.output, "w") as fh:
        fh.write(formats.render_svg(g, S, overlay))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steinerspan", description="Plane Steiner spanners for point sets.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a point set")
    g.add_argument("kind", choices=KINDS)
    g.add_argument("-n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--jitter", type=float, help="grid-jitter displacement (grid units)")
    g.add_argument("--radius", type=float, help="poisson-disk radius")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build a spanner")
    b.add_argument("input")
    b.add_argument("--eps", type=float, required=True)
    b.add_argument("-o", "--output", required=True)
    b.add_argument("--dt-file", help="triangulation to use, one triangle per line")
    b.add_argument("--stats", help="write build statistics (JSON) here")
    b.add_argument("--snap-grid", type=float, metavar="G", help="round sites to multiples of G first")
    b.add_argument("--threads", type=int, default=None)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--constants", choices=sorted(PRESETS), default="practical")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="check a spanner against its points")
    v.add_argument("points")
    v.add_argument("spanner")
    v.add_argument("--eps", type=float, required=True)
    v.add_argument("--pairs", choices=("all", "sample"), default="all")
    v.add_argument("-k", type=int, default=1000, help="pairs to sample")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--coverage-samples", type=int, default=10000)
    v.add_argument("--tsp", action=argparse.BooleanOptionalAction, default=None)
    v.add_argument("--report")
    v.add_argument("--threads", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="print spanner statistics")
    s.add_argument("spanner")
    s.set_defaults(func=cmd_stats)

    r = sub.add_parser("render", help="draw a spanner as SVG")
    r.add_argument("spanner")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--points", help="overlay these points")
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except TooSharpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
