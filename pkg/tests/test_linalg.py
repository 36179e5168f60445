import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles as o
from semiclique.linalg import (FormatError, IntVector, SignedGraph, SignedVector, aggregate, column, degree,
                               hamming, index_set, inner, l1_norm, restrict, triangle_bytes, triple_column)

# values below were produced by the entry-by-entry oracle on the tiny8 fixture
TINY8_PLANTED = [0, 2, 4, 7]
TINY8_COL0 = [1, -1, 1, 1, 1, -1, -1, 1]
TINY8_INNER01 = -2
TINY8_COL4_ON_S = [1, 1, 1, 1]
TINY8_L1_REST_B = 8  # B = {(0,1,2), (1,2,3)}
TINY8_DEG0 = 4


def random_graph(n, seed):
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.integers(0, 2, (n, n)).astype(bool), 1)
    return SignedGraph.from_adjacency(upper | upper.T)


def test_tiny8_planted(tiny8):
    assert list(tiny8.planted) == TINY8_PLANTED


# -- column -----------------------------------------------------------------------

def test_column_complete():
    assert column(SignedGraph.complete(8), 3).to_array().tolist() == [1] * 8


def test_column_empty_graph():
    expected = [-1] * 8
    expected[3] = 1
    assert column(SignedGraph.empty(8), 3).to_array().tolist() == expected


def test_column_tiny8(tiny8):
    g = tiny8.graph
    assert o.col(g, 0) == TINY8_COL0
    assert column(g, 0).to_array().tolist() == TINY8_COL0


def test_column_out_of_range():
    with pytest.raises(ValueError):
        column(SignedGraph.empty(4), 4)


def test_columns_match_entries_everywhere(tiny8):
    g = tiny8.graph
    for v in range(g.n):
        assert column(g, v).to_array().tolist() == o.col(g, v)
        assert g.signs[:, v].tolist() == o.col(g, v)


# -- inner ------------------------------------------------------------------------

def test_inner_self():
    x = SignedVector.from_array([1, -1, -1, 1, 1])
    assert inner(x, x) == 5


def test_inner_empty_graph():
    g = SignedGraph.empty(8)
    assert inner(column(g, 0), column(g, 1)) == 4


def test_inner_tiny8(tiny8):
    g = tiny8.graph
    x, y = column(g, 0), column(g, 1)
    assert o.dot(o.col(g, 0), o.col(g, 1)) == TINY8_INNER01
    assert inner(x, y) == TINY8_INNER01 == 8 - 2 * hamming(x, y)


def test_inner_length_mismatch():
    with pytest.raises(ValueError):
        inner(SignedVector.from_array([1, 1]), SignedVector.from_array([1, 1, 1]))


@pytest.mark.parametrize("n", range(1, 13))
def test_inner_hamming_identity_exhaustive(n):
    # every pair for n <= 6, a fixed sweep of pairs above that
    vectors = list(itertools.product([1, -1], repeat=n))
    pairs = itertools.product(vectors, repeat=2) if n <= 6 else zip(vectors, vectors[::-1])
    for a, b in pairs:
        x, y = SignedVector.from_array(a), SignedVector.from_array(b)
        assert inner(x, y) == o.dot(a, b) == n - 2 * hamming(x, y)


@given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=300), st.randoms())
def test_inner_matches_naive(values, rnd):
    other = [rnd.choice([1, -1]) for _ in values]
    assert inner(SignedVector.from_array(values), SignedVector.from_array(other)) == o.dot(values, other)


# -- triple_column ----------------------------------------------------------------

def test_triple_repeated_vertex(tiny8):
    g = tiny8.graph
    for u in range(g.n):
        assert triple_column(g, u, u, u) == column(g, u)


def test_triple_complete():
    assert triple_column(SignedGraph.complete(8), 1, 5, 6).to_array().tolist() == [1] * 8


def test_triple_clique_rows(tiny8):
    g = tiny8.graph
    t = triple_column(g, 0, 2, 4).to_array()
    assert all(t[w] == 1 for w in TINY8_PLANTED)


def test_triple_matches_naive(tiny8):
    g = tiny8.graph
    for b in itertools.product(range(8), repeat=3):
        assert triple_column(g, *b).to_array().tolist() == o.triple(g, *b)


def test_triple_out_of_range(tiny8):
    with pytest.raises(ValueError):
        triple_column(tiny8.graph, 0, 1, 8)


# -- restrict ---------------------------------------------------------------------

def test_restrict_all_and_none(tiny8):
    x = column(tiny8.graph, 5)
    assert restrict(x, range(8)) == x
    assert len(restrict(x, [])) == 0
    t = aggregate(tiny8.graph, [(0, 1, 2)])
    assert restrict(t, range(8)) == t
    assert len(restrict(t, [])) == 0


def test_restrict_tiny8(tiny8):
    g = tiny8.graph
    assert [o.col(g, 4)[i] for i in TINY8_PLANTED] == TINY8_COL4_ON_S
    assert restrict(column(g, 4), tiny8.planted).to_array().tolist() == TINY8_COL4_ON_S


def test_restrict_invalid_index(tiny8):
    with pytest.raises(ValueError):
        restrict(column(tiny8.graph, 0), [0, 8])


# -- aggregate / l1 ---------------------------------------------------------------

def test_aggregate_empty_and_single(tiny8):
    g = tiny8.graph
    assert aggregate(g, []).values.tolist() == [0] * 8
    assert aggregate(g, [(3, 3, 3)]).values.tolist() == column(g, 3).to_array().tolist()


def test_aggregate_complete():
    g = SignedGraph.complete(8)
    assert aggregate(g, [(0, 1, 2)] * 5).values.tolist() == [5] * 8


def test_aggregate_matches_naive(tiny8):
    g = tiny8.graph
    rng = np.random.default_rng(3)
    for size in range(0, 9):
        B = [tuple(b) for b in rng.integers(0, 8, (size, 3))]
        assert aggregate(g, B).values.tolist() == o.aggregate(g, B)


def test_aggregate_range_and_parity(tiny8):
    g = tiny8.graph
    B = list(itertools.product(tiny8.planted, repeat=3))[:11]
    vals = aggregate(g, B).values
    assert np.all(np.abs(vals) <= len(B))
    assert np.all((vals - len(B)) % 2 == 0)


def test_l1_norm_examples(tiny8):
    assert l1_norm(IntVector([0] * 8)) == 0
    assert l1_norm(IntVector([5] * 8)) == 40
    g = tiny8.graph
    B = [(0, 1, 2), (1, 2, 3)]
    agg = o.aggregate(g, B)
    assert sum(abs(agg[i]) for i in tiny8.rest) == TINY8_L1_REST_B
    assert l1_norm(restrict(aggregate(g, B), tiny8.rest)) == TINY8_L1_REST_B


# -- degree -----------------------------------------------------------------------

def test_degree_examples(tiny8):
    assert all(degree(SignedGraph.complete(8), v) == 7 for v in range(8))
    assert all(degree(SignedGraph.empty(8), v) == 0 for v in range(8))
    assert o.degree(tiny8.graph, 0) == TINY8_DEG0
    assert degree(tiny8.graph, 0) == TINY8_DEG0 >= 3


def test_degree_matches_naive():
    g = random_graph(37, 1)
    assert [degree(g, v) for v in range(37)] == [o.degree(g, v) for v in range(37)]


# -- graph structure and SPC1 -----------------------------------------------------

@pytest.mark.parametrize("n", [1, 2, 3, 7, 8, 9, 64, 65, 130])
def test_storage_size_and_symmetry(n):
    g = random_graph(n, n)
    assert len(g.bits) == triangle_bytes(n) == math.ceil(n * (n - 1) / 2 / 8)
    s = g.signs
    assert np.array_equal(s, s.T)
    assert np.all(np.diag(s) == 1)


def test_spc1_round_trip_byte_exact():
    g = random_graph(50, 2)
    data = g.to_bytes()
    assert data[:4] == b"SPC1"
    assert int.from_bytes(data[4:8], "little") == 50
    again = SignedGraph.from_bytes(data)
    assert again == g and again.to_bytes() == data


def test_spc1_pair_order():
    # single edge (0, 2) in a 4-vertex graph: pairs (0,1),(0,2),... so bit index 1
    adj = np.zeros((4, 4), dtype=bool)
    adj[0, 2] = adj[2, 0] = True
    assert SignedGraph.from_adjacency(adj).bits == bytes([0b01000000])


@pytest.mark.parametrize("data", [b"", b"SPC", b"XPC1\x04\x00\x00\x00\x00", b"SPC1\x04\x00\x00\x00", b"SPC1\x04\x00\x00\x00\x00\x00"])
def test_spc1_rejects_corrupt(data):
    with pytest.raises(FormatError):
        SignedGraph.from_bytes(data)


def test_index_set():
    assert index_set([3, 1, 3], 5).tolist() == [1, 3]
    with pytest.raises(ValueError):
        index_set([5], 5)


# -- cross-cutting identities ------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 6))
def test_linearity_and_split(seed, size):
    from semiclique.instance import InstanceParams, Random, generate
    inst = generate(InstanceParams(24, 6, seed, Random()))
    g = inst.graph
    rng = np.random.default_rng(seed)
    B = [tuple(b) for b in rng.integers(0, 24, (size, 3))]
    v = int(rng.integers(24))
    agg = aggregate(g, B)
    colv = column(g, v).to_array().astype(int)
    full = int(agg.values @ colv)
    assert sum(inner(triple_column(g, *b), column(g, v)) for b in B) == full
    S, R = inst.planted, inst.rest
    s_part = int(restrict(agg, S).values @ colv[S])
    r_part = int(restrict(agg, R).values @ colv[R])
    assert s_part + r_part == full
    assert r_part <= l1_norm(restrict(agg, R))


def test_clique_columns_agree_on_s(tiny8):
    g, S = tiny8.graph, tiny8.planted
    for u, v in itertools.permutations(S, 2):
        assert inner(restrict(column(g, u), S), restrict(column(g, v), S)) == len(S)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 9), st.integers(0, 10 ** 6))
def test_clique_oracles_agree(n, seed):
    rng = np.random.default_rng(seed)
    g = SignedGraph.from_adjacency(rng.random((n, n)) < 0.6)
    assert sorted(o.maximum_cliques(g)) == o.maximum_cliques_bk(g)
