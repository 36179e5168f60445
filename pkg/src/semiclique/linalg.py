"""Bit-packed signed vectors and symmetric +/-1 matrices.

A graph is viewed as the signed adjacency matrix ``A`` with ``A[u, v] = +1``
for an edge, ``-1`` for a non-edge and ``+1`` on the diagonal.  Columns are
kept as packed 64-bit words so inner products reduce to XOR and popcount.
"""
from __future__ import annotations

import struct
from functools import cached_property

import numpy as np

MAGIC = b"SPC1"
MAX_AGGREGATE = 1 << 20


class FormatError(ValueError):
    """Raised for malformed graph or sidecar files."""


def triangle_bytes(n: int) -> int:
    return (n * (n - 1) // 2 + 7) // 8


def _words(n: int) -> int:
    return (n + 63) // 64


def _pack_rows(mat: np.ndarray) -> np.ndarray:
    """Pack a 2-D boolean array row-wise into uint64 words (bit j -> column j)."""
    rows, n = mat.shape
    w = _words(n)
    padded = np.zeros((rows, w * 64), dtype=bool)
    padded[:, :n] = mat
    return np.packbits(padded, axis=1, bitorder="little").view("<u8").reshape(rows, w)


def _unpack_rows(words: np.ndarray, n: int) -> np.ndarray:
    flat = np.ascontiguousarray(words).astype("<u8").view(np.uint8)
    bits = np.unpackbits(flat.reshape(words.shape[0], -1), axis=1, bitorder="little")
    return bits[:, :n].astype(bool)


def index_set(idx, n: int) -> np.ndarray:
    """Sorted, distinct, range-checked vertex indices as a read-only array."""
    arr = np.unique(np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= n):
        raise ValueError(f"index out of range for length {n}")
    arr.flags.writeable = False
    return arr


class SignedVector:
    """A +/-1 vector stored as packed words (bit 1 means +1)."""

    __slots__ = ("n", "words")

    def __init__(self, n: int, words: np.ndarray):
        self.n = n
        self.words = words
        self.words.flags.writeable = False

    @classmethod
    def from_array(cls, values) -> SignedVector:
        arr = np.asarray(values)
        if arr.ndim != 1 or not np.all(np.abs(arr) == 1):
            raise ValueError("signed vector entries must be +1 or -1")
        return cls(arr.size, _pack_rows((arr > 0)[None, :])[0])

    def to_array(self) -> np.ndarray:
        bits = _unpack_rows(self.words[None, :], self.n)[0]
        return np.where(bits, 1, -1).astype(np.int8)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, SignedVector) and self.n == other.n and np.array_equal(self.words, other.words)

    def __repr__(self) -> str:
        return f"SignedVector(n={self.n})"


class IntVector:
    """Integer vector, typically an aggregate of triple columns."""

    __slots__ = ("values",)

    def __init__(self, values):
        self.values = np.asarray(values, dtype=np.int32)
        self.values.flags.writeable = False

    @property
    def n(self) -> int:
        return self.values.size

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        return isinstance(other, IntVector) and np.array_equal(self.values, other.values)

    def __repr__(self) -> str:
        return f"IntVector(n={self.n})"


class SignedGraph:
    """Simple undirected graph on ``n`` vertices with a signed matrix view.

    ``bits`` is the canonical storage: the strict upper triangle in row-major
    pair order, packed MSB-first, exactly ``ceil(n(n-1)/2 / 8)`` bytes.
    """

    def __init__(self, n: int, bits: bytes):
        if n < 1:
            raise ValueError("vertex count must be positive")
        if len(bits) != triangle_bytes(n):
            raise ValueError(f"expected {triangle_bytes(n)} bytes for n={n}, got {len(bits)}")
        self.n = n
        self.bits = bytes(bits)

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> SignedGraph:
        """Build from a boolean matrix; only the strict upper triangle is read."""
        adj = np.asarray(adj, dtype=bool)
        n = adj.shape[0]
        if adj.shape != (n, n):
            raise ValueError("adjacency must be square")
        if n == 1:
            return cls(1, b"")
        flat = np.concatenate([adj[i, i + 1:] for i in range(n - 1)])
        g = cls(n, np.packbits(flat).tobytes())
        upper = np.triu(adj, 1)
        g.__dict__["adjacency"] = _readonly(upper | upper.T)
        return g

    @classmethod
    def complete(cls, n: int) -> SignedGraph:
        return cls.from_adjacency(np.ones((n, n), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> SignedGraph:
        return cls.from_adjacency(np.zeros((n, n), dtype=bool))

    # -- derived views (cached; the object is immutable) ------------------
    @cached_property
    def adjacency(self) -> np.ndarray:
        """Symmetric boolean adjacency, no self-loops."""
        n = self.n
        flat = np.unpackbits(np.frombuffer(self.bits, dtype=np.uint8), count=n * (n - 1) // 2).astype(bool)
        adj = np.zeros((n, n), dtype=bool)
        pos = 0
        for i in range(n - 1):
            m = n - 1 - i
            adj[i, i + 1:] = flat[pos:pos + m]
            pos += m
        adj |= adj.T
        return _readonly(adj)

    @cached_property
    def packed(self) -> np.ndarray:
        """Packed signed columns, diagonal bit set; row v is column v."""
        mat = self.adjacency.copy()
        np.fill_diagonal(mat, True)
        return _readonly(_pack_rows(mat))

    @cached_property
    def signs(self) -> np.ndarray:
        """Dense float32 +/-1 matrix view (exact for integer sums below 2**24)."""
        s = np.where(self.adjacency, np.float32(1), np.float32(-1))
        np.fill_diagonal(s, 1)
        return _readonly(s)

    def entry(self, u: int, v: int) -> int:
        """Signed matrix entry read straight from the packed triangle."""
        _check_vertex(self, u)
        _check_vertex(self, v)
        if u == v:
            return 1
        i, j = min(u, v), max(u, v)
        pos = i * (2 * self.n - i - 1) // 2 + (j - i - 1)
        return 1 if (self.bits[pos >> 3] >> (7 - (pos & 7))) & 1 else -1

    def with_edge(self, u: int, v: int, present: bool) -> SignedGraph:
        """Copy of the graph with one edge set or cleared."""
        if u == v:
            raise ValueError("self-loops are not representable")
        adj = self.adjacency.copy()
        adj[u, v] = adj[v, u] = present
        return SignedGraph.from_adjacency(adj)

    # -- SPC1 ---------------------------------------------------------------
    def to_bytes(self) -> bytes:
        return MAGIC + struct.pack("<I", self.n) + self.bits

    @classmethod
    def from_bytes(cls, data: bytes) -> SignedGraph:
        if len(data) < 8 or data[:4] != MAGIC:
            raise FormatError("bad magic: not an SPC1 graph")
        (n,) = struct.unpack("<I", data[4:8])
        if n < 1 or len(data) != 8 + triangle_bytes(n):
            raise FormatError(f"SPC1 payload length {len(data) - 8} does not match n={n}")
        return cls(n, data[8:])

    def __eq__(self, other) -> bool:
        return isinstance(other, SignedGraph) and self.n == other.n and self.bits == other.bits

    def __hash__(self) -> int:
        return hash((self.n, self.bits))

    def __repr__(self) -> str:
        return f"SignedGraph(n={self.n})"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _check_vertex(g: SignedGraph, v) -> int:
    if not (0 <= int(v) < g.n):
        raise ValueError(f"vertex {v} out of range for n={g.n}")
    return int(v)


def column(g: SignedGraph, v: int) -> SignedVector:
    v = _check_vertex(g, v)
    return SignedVector(g.n, g.packed[v].copy())


def hamming(x: SignedVector, y: SignedVector) -> int:
    if x.n != y.n:
        raise ValueError(f"length mismatch: {x.n} != {y.n}")
    return int(np.bitwise_count(x.words ^ y.words).sum())


def inner(x: SignedVector, y: SignedVector) -> int:
    """Exact integer inner product of two signed vectors."""
    return x.n - 2 * hamming(x, y)


def triple_column(g: SignedGraph, u1: int, u2: int, u3: int) -> SignedVector:
    """Entrywise product of three columns."""
    rows = g.packed
    a, b, c = (_check_vertex(g, u) for u in (u1, u2, u3))
    # with bit 1 = +1, the product is +1 iff an odd number of bits are set
    return SignedVector(g.n, rows[a] ^ rows[b] ^ rows[c])


def restrict(x, idx) -> SignedVector | IntVector:
    """Keep the coordinates listed in ``idx`` (sorted ascending)."""
    idx = index_set(idx, len(x))
    if isinstance(x, SignedVector):
        bits = _unpack_rows(x.words[None, :], x.n)[0][idx]
        return SignedVector(idx.size, _pack_rows(bits[None, :])[0])
    if isinstance(x, IntVector):
        return IntVector(x.values[idx])
    raise TypeError(f"cannot restrict {type(x).__name__}")


def _triples(g: SignedGraph, B) -> np.ndarray:
    arr = np.asarray(B, dtype=np.int64).reshape(-1, 3)
    if arr.size and (arr.min() < 0 or arr.max() >= g.n):
        raise ValueError(f"triple vertex out of range for n={g.n}")
    return arr


def triple_rows(g: SignedGraph, triples: np.ndarray) -> np.ndarray:
    """Dense float32 triple columns, one per row: shape (len(triples), n)."""
    s = g.signs
    return s[triples[:, 0]] * s[triples[:, 1]] * s[triples[:, 2]]


def aggregate(g: SignedGraph, B) -> IntVector:
    """Sum of triple columns over B, i.e. ``T 1_B``."""
    triples = _triples(g, B)
    if len(triples) > MAX_AGGREGATE:
        raise ValueError(f"|B| = {len(triples)} exceeds cap {MAX_AGGREGATE}")
    total = np.zeros(g.n, dtype=np.int64)
    chunk = max(1, (1 << 22) // g.n)
    for start in range(0, len(triples), chunk):
        total += triple_rows(g, triples[start:start + chunk]).sum(axis=0, dtype=np.float64).astype(np.int64)
    return IntVector(total)


def l1_norm(t: IntVector) -> int:
    return int(np.abs(t.values.astype(np.int64)).sum())


def degree(g: SignedGraph, v: int) -> int:
    v = _check_vertex(g, v)
    return int(np.bitwise_count(g.packed[v]).sum()) - 1


def degrees(g: SignedGraph) -> np.ndarray:
    return np.bitwise_count(g.packed).sum(axis=1).astype(np.int64) - 1
