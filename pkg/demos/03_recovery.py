"""
Recovering the clique
=====================

The triple-sampling solver draws triples of vertices, keeps every vertex
whose column has inner product at least k/2 with the triple column, cleans
each guess up by neighbour counting, and prunes the results to a short list
of nearly disjoint cliques.  Degree and spectral baselines are here for
comparison.
"""
import math
import time

import numpy as np

from semiclique import DegreeBoost, FakeCliques, InstanceParams, Random, SignMatch, generate
from semiclique.solvers import (SolverConfig, solve_degree, solve_semirandom, solve_single_full,
                                solve_spectral, triple_budget)

n = 2048
k = math.ceil(3 * math.sqrt(n * math.log(n)))
print(f"n={n} k={k} triple budget={triple_budget(n, k)}")

for adv in [Random(), FakeCliques(4), DegreeBoost(1, k), SignMatch(4, 1024)]:
    inst = generate(InstanceParams(n, k, 3, adv))
    S = inst.planted
    t0 = time.perf_counter()
    found = solve_semirandom(inst.graph, k, seed=3)
    took = time.perf_counter() - t0
    hit = any(np.array_equal(c, S) for c in found)
    degree_hit = np.array_equal(solve_degree(inst.graph, k), S)
    spectral_hit = np.array_equal(solve_spectral(inst.graph, k, seed=3), S)
    print(f"{str(adv):32s} triple: {hit} (list of {len(found)}, {took:.1f}s)  "
          f"degree: {degree_hit}  spectral: {spectral_hit}")

# with fake cliques the list holds every planted-looking clique; which one is S is undecidable
inst = generate(InstanceParams(n, k, 3, FakeCliques(4)))
print("list sizes:", [len(c) for c in solve_semirandom(inst.graph, k, seed=3)])

# single vertices instead of triples: cheaper, but needs a bigger clique
for kk in (k, math.ceil(3 * n ** 0.75)):
    inst = generate(InstanceParams(n, kk, 4, SignMatch(4, 1024)))
    found = solve_single_full(inst.graph, kk, SolverConfig(), seed=4)
    print(f"single-vertex solver at k={kk}: recovered={any(np.array_equal(c, inst.planted) for c in found)}")
