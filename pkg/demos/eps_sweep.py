"""
Size, weight and stretch against eps
====================================

Smaller eps buys a tighter stretch with more Steiner points. This walks a
blue-noise point set through a range of eps and prints what each step costs.
"""

import argparse
import time

import numpy as np

from steinerspan.generators import generate
from steinerspan.spanner import build_spanner
from steinerspan.verify import max_dilation

parser = argparse.ArgumentParser()
parser.add_argument("-n", type=int, default=100)
parser.add_argument("--seed", type=int, default=0)
parser.add_argument("--eps", type=float, nargs="+", default=[0.5, 0.35, 0.25, 0.15, 0.1])
args = parser.parse_args()

P = generate("poisson-disk", args.n, seed=args.seed)
print("%d sites" % len(P))
print("%6s %7s %7s %9s %9s %9s %7s" % ("eps", "eps_p", "delta", "vertices", "weight", "dilation", "secs"))

rows = []
for eps in args.eps:
    t0 = time.perf_counter()
    sp = build_spanner(P, eps)
    d = max_dilation(sp)
    secs = time.perf_counter() - t0
    c = sp.config
    print("%6.2f %7.4f %7.4f %9d %9.1f %9.4f %7.1f"
          % (eps, c.eps_p, c.wedge_half_angle, sp.graph.n_vertices, sp.stats["weight_ratio"], d.ratio, secs))
    rows.append((c.beta, sp.graph.n_vertices, sp.stats["weight_ratio"], eps, c.alpha))

# growth against the shape of the size and weight bounds
beta, V, W, eps, alpha = map(np.array, zip(*rows))
if len(rows) > 1:
    sv = np.polyfit(np.log(beta ** 2 / eps * len(P)), np.log(V), 1)[0]
    sw = np.polyfit(np.log(beta / alpha), np.log(W), 1)[0]
    print("log-log slope of vertices vs beta^2 n / eps: %.2f" % sv)
    print("log-log slope of weight ratio vs beta / alpha: %.2f" % sw)
