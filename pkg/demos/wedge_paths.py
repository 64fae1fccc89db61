"""
Escape paths inside one triangle
================================

For a direction theta every boundary point gets a path that never turns more
than delta away from theta, so its length is at most its span over cos(delta).
Points on an edge that already runs within delta of theta simply follow the
edge. The total length of the rays grows like log n, not n.
"""

import argparse
import math

from steinerspan.wedges import (
    BoundaryPoint,
    ConvexPolygon,
    build_wedges,
    path_length,
    trace_path,
    wedge_length_bound,
)

parser = argparse.ArgumentParser()
parser.add_argument("--theta", type=float, default=0.3)
parser.add_argument("--delta", type=float, default=math.pi / 9)
args = parser.parse_args()

K = ConvexPolygon([(0, 0), (1, 0), (0.3, 0.9)])


def spaced(n):
    sides = [math.dist(*K.edge(i)) for i in range(3)]
    out = []
    for k in range(n):
        s = K.perimeter * k / n
        i = 0
        while s >= sides[i]:
            s -= sides[i]
            i += 1
        out.append(BoundaryPoint.on(K, i, s / sides[i]))
    return out


S = build_wedges(K, spaced(24), args.theta, args.delta)
print("24 points: %d rays, %d shooting points" % (len(S.segments), len(S.order)))
for i in S.order[:6]:
    p = trace_path(i, S)
    if p:
        ratio = path_length(p) / math.dist(p[0], p[-1])
        print("  from (%.3f, %.3f): %d links, length/dist %.4f (cap %.4f)"
              % (*p[0], len(p) - 1, ratio, 1 / math.cos(args.delta)))

print("\n%6s %10s %12s %8s" % ("n", "total", "l ln n / d", "C"))
for n in (8, 32, 128, 512):
    S = build_wedges(K, spaced(n), args.theta, args.delta)
    b = wedge_length_bound(K.perimeter, n, args.delta)
    print("%6d %10.3f %12.3f %8.3f" % (n, S.total_length, b, S.total_length / b))
