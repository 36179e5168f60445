"""
Checking the l1 aggregate bounds
================================

The solver works because, for any set B of clique triples, the aggregate
T 1_B restricted to the non-clique rows has small l1 norm, so no outsider
column can correlate with many triples at once.  The verifier measures the
pieces of that argument and reports each against its bound.
"""
import math

import numpy as np

from semiclique import InstanceParams, Random, SignMatch, generate
from semiclique import verifier as vf
from semiclique.instance import replay_trace

n = 2048
k = math.ceil(3 * math.sqrt(n * math.log(n)))
inst = generate(InstanceParams(n, k, 0, Random()))
v = int(inst.rest[0])

reports = [
    vf.l1_aggregate_stats(inst, 16, 50, seed=1),
    vf.l1_deviation_stats(inst, 16, 50, seed=1),
    vf.gaussian_max_stat(inst, 200, 20, seed=1),
    vf.boring_part_stat(inst, v, 8, 20, seed=1),
    vf.diamond_to_success(inst, 50, 256, seed=1),
]
for r in reports:
    print(f"{r.name:18s} observed {r.observed:10.1f}  bound {r.bound:10.1f}  ratio {r.ratio:.3f}")

# bad pairs and bad triples for a handful of outsiders
bound = n ** 2 / k ** 2
vs = inst.rest[:8]
est, exact = vf.bad_triple_counts(inst, vs, 20000, seed=2)
print("bad pairs:", [vf.bad_pairs(inst, u) for u in vs], "bad triple estimates:", est.round().tolist(),
      f"bound {bound:.1f}")

# Under sign matching a victim's inner product with the pool aggregate is the l1 norm itself,
# short only by the coordinates the adversary could not choose.
sm = generate(InstanceParams(1024, 160, 0, SignMatch(4, 1024)))
for victim in replay_trace(sm)["victims"]:
    r = vf.holder_equality_check(sm, victim)
    print(f"victim {victim}: <t, A^v> = {r.extra['lhs']}  ||t||_1 = {r.extra['rhs']}  "
          f"uncontrolled defect {r.extra['defect']}  identity holds: {r.passed}")

# second-moment structure at desk scale
small = generate(InstanceParams(64, 16, 0, Random()))
S = small.planted
print(vf.gram_diagonal_check(small, [S[[0, 1, 2]], S[[0, 1, 3]], S[[4, 5, 6]]], 200, seed=0))
print(vf.reports_to_csv(reports[:2]))
