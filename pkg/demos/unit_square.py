"""
Four points, one spanner
========================

The boundary of a unit square is a plane graph, but opposite corners are
sqrt(2) apart along it, a stretch of 1.41. Adding Steiner points inside the
two Delaunay triangles brings every pair close to straight-line distance
without ever crossing an edge.
"""

import argparse
import math

import numpy as np

from steinerspan import build_spanner
from steinerspan.arrangement import PlanarGraph
from steinerspan.formats import render_svg
from steinerspan.verify import check_plane, max_dilation

parser = argparse.ArgumentParser()
parser.add_argument("--eps", type=float, default=0.1)
parser.add_argument("--svg", default="unit_square.svg")
args = parser.parse_args()

square = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=float)

# the square's boundary on its own
ring = PlanarGraph(square, [(0, 1), (1, 2), (2, 3), (3, 0)])
print("boundary only:   dilation %.4f" % max_dilation(ring, site_map=range(4)).ratio)

sp = build_spanner(square, args.eps)
d = max_dilation(sp)
print("steiner spanner: dilation %.4f (target %.2f)" % (d.ratio, 1 + args.eps))
print("  %d vertices, %d edges, weight %.2f x MST"
      % (sp.graph.n_vertices, sp.graph.n_edges, sp.stats["weight_ratio"]))
print("  plane:", bool(check_plane(sp.graph)))
print("  worst pair", d.pair, "path of %d hops" % (len(d.path) - 1))

# the diagonal is a Delaunay edge, so the midpoint portal sits where the
# other diagonal would cross it
print("  centre is a vertex:", bool((sp.graph.vertices == 0.5).all(1).any()))

with open(args.svg, "w") as fh:
    fh.write(render_svg(sp.graph, sp.site_map))
print("wrote", args.svg, "(%.0f kB)" % (math.ceil(len(open(args.svg).read()) / 1024)))
