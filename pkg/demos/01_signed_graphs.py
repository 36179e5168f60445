"""
Signed graphs and inner products
================================

A graph is stored as its upper triangle, one bit per pair.  Columns of the
signed matrix (+1 edge, -1 non-edge, +1 on the diagonal) are packed into
64-bit words so an inner product is a single popcount.
"""
import numpy as np

from semiclique import InstanceParams, Random, generate
from semiclique.linalg import SignedGraph, aggregate, column, inner, l1_norm, restrict, triple_column

inst = generate(InstanceParams(8, 4, 42, Random()))
g = inst.graph
print("planted set:", inst.planted.tolist())
print(g.signs.astype(int))

# inner products of two columns: n - 2 * (number of disagreeing coordinates)
print("inner(0, 1) =", inner(column(g, 0), column(g, 1)))

# for three clique members the triple column is +1 on every clique row
a, b, c = inst.planted[:3]
t = triple_column(g, a, b, c).to_array()
print("triple column on S:", t[inst.planted].tolist())

# summing triple columns over a set B gives the aggregate T 1_B
B = [(0, 2, 4), (2, 4, 7)]
agg = aggregate(g, B)
print("T 1_B =", agg.values.tolist(), " l1 outside S:", l1_norm(restrict(agg, inst.rest)))

# the on-disk form is a 4-byte magic, the size, and the packed triangle
blob = g.to_bytes()
print(len(blob), "bytes;", SignedGraph.from_bytes(blob) == g)

# large graphs go through the same code; the dense float32 view is only built on demand
big = generate(InstanceParams(4096, 554, 0, Random())).graph
u, v = 0, 1
print("n=4096 inner:", inner(column(big, u), column(big, v)),
      "dense check:", int(big.signs[u] @ big.signs[v]))
assert np.array_equal(big.signs[u] > 0, column(big, u).to_array() > 0)
