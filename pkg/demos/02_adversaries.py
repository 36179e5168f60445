"""
Semirandom instances
====================

Edges from the clique to the rest are fair coins.  Edges among the rest
are chosen by an adversary who has already seen those coins.  Four
strategies ship with the package; each leaves a trace we can inspect.
"""
import numpy as np

from semiclique import DegreeBoost, FakeCliques, InstanceParams, Random, SignMatch, generate
from semiclique.instance import replay_trace, validate

n, k = 1024, 160
for adv in [Random(), FakeCliques(3), DegreeBoost(2, k), SignMatch(4, 256)]:
    inst = generate(InstanceParams(n, k, 1, adv))
    deg = inst.graph.adjacency.sum(axis=1)
    print(f"{str(adv):32s} valid={validate(inst) == []}  "
          f"clique degree {deg[inst.planted].mean():6.1f}  rest degree {deg[inst.rest].mean():6.1f}")

# FakeCliques hides disjoint k-cliques among the rest
inst = generate(InstanceParams(n, k, 1, FakeCliques(3)))
for fake in inst.trace["fake_cliques"]:
    sub = inst.graph.adjacency[np.ix_(fake, fake)]
    print("fake clique of size", len(fake), "complete:", sub.sum() == len(fake) * (len(fake) - 1))

# DegreeBoost lifts a few outsiders above every clique vertex
inst = generate(InstanceParams(n, k, 1, DegreeBoost(2, k)))
deg = inst.graph.adjacency.sum(axis=1)
print("boosted victims:", inst.trace["victims"], "degrees", deg[inst.trace["victims"]],
      "max clique degree", deg[inst.planted].max())

# SignMatch aligns a victim's rest-edges with the sign of a pooled triple aggregate;
# the trace is replayed from the seed rather than stored
inst = generate(InstanceParams(n, k, 1, SignMatch(4, 256)))
trace = replay_trace(inst)
print("sign-match victims:", trace["victims"].tolist(), "pool size", len(trace["pool"]))
