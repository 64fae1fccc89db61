"""
Tours through a spanner
=======================

An optimal tour measured inside a (1 + eps)-spanner costs at most (1 + eps)
times the Euclidean optimum, and never less. Exact Held-Karp on both sides
shows how much of that slack a real instance uses.
"""

import argparse

from steinerspan.generators import generate
from steinerspan.spanner import build_spanner
from steinerspan.verify import held_karp_euclidean, held_karp_metric

parser = argparse.ArgumentParser()
parser.add_argument("--eps", type=float, default=0.25)
parser.add_argument("--instances", type=int, default=6)
args = parser.parse_args()

for k in range(args.instances):
    n = (8, 10, 12)[k % 3]
    P = generate("uniform", n, seed=100 + k)
    sp = build_spanner(P, args.eps)
    euc = held_karp_euclidean(P)
    met = held_karp_metric(sp)
    print("n=%2d  euclidean %.4f  in spanner %.4f  ratio %.5f  (%d vertices)"
          % (n, euc, met, met / euc, sp.graph.n_vertices))
