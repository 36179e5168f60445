"""Planted-clique recovery: baselines, inner-product samplers, cleanup and pruning.

Solvers only ever see a :class:`SignedGraph` and ``k``; the planted set is
never an input.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ._rng import derive_seed, indexed_draws, stream
from .linalg import SignedGraph, _check_vertex, index_set

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    threshold_num: int = 1
    threshold_den: int = 2
    gamma: float = 0.1
    sample_budget: int | None = None
    overlap_den: int = 2
    power_iters: int = 100

    def __post_init__(self):
        if not 0 < self.gamma < 0.25:
            raise ValueError("gamma must lie in (0, 1/4)")
        if self.threshold_num <= 0 or self.threshold_den <= 0 or self.overlap_den <= 0:
            raise ValueError("thresholds must be positive")
        if self.sample_budget is not None and self.sample_budget < 0:
            raise ValueError("sample_budget must be non-negative")


DEFAULT = SolverConfig()


def triple_budget(n: int, k: int) -> int:
    """ceil(10 (n/k)^3), computed exactly."""
    return -(-10 * n ** 3 // k ** 3)


def single_budget(n: int, k: int) -> int:
    return -(-10 * n // k)


def _top_k(score: np.ndarray, k: int) -> np.ndarray:
    # largest score first, smaller index on ties
    order = np.lexsort((np.arange(score.size), -score))
    return index_set(order[:k], score.size)


# -- baselines ---------------------------------------------------------------------

def solve_degree(g: SignedGraph, k: int) -> np.ndarray:
    """The k highest-degree vertices."""
    if not 0 <= k <= g.n:
        raise ValueError(f"k={k} out of range for n={g.n}")
    deg = np.bitwise_count(g.packed).sum(axis=1).astype(np.int64) - 1
    return _top_k(deg, k)


def solve_spectral(g: SignedGraph, k: int, cfg: SolverConfig = DEFAULT, seed: int = 0) -> np.ndarray:
    """Power iteration on the signed matrix, top-k by |coordinate|, one cleanup pass."""
    if not 0 <= k <= g.n:
        raise ValueError(f"k={k} out of range for n={g.n}")
    mat = g.signs.astype(np.float64)
    x = stream(seed, "spectral").standard_normal(g.n)
    for _ in range(cfg.power_iters):
        y = mat @ x
        norm = np.linalg.norm(y)
        if norm == 0:
            break
        x = y / norm
    # rounding kills float noise so exact ties fall back to index order
    guess = _top_k(np.round(np.abs(x), 12), k)
    return post_process(g, guess, k, cfg.gamma)


# -- inner-product candidates -----------------------------------------------------

def _accept(scores: np.ndarray, k: int, cfg: SolverConfig) -> np.ndarray:
    # integer-exact form of score >= k * num / den
    return scores.astype(np.int64) * cfg.threshold_den >= k * cfg.threshold_num


def candidate_single(g: SignedGraph, k: int, u: int, cfg: SolverConfig = DEFAULT) -> np.ndarray:
    """Vertices whose column has inner product >= k/2 with column u."""
    u = _check_vertex(g, u)
    rows = g.packed
    scores = g.n - 2 * np.bitwise_count(rows ^ rows[u]).sum(axis=1).astype(np.int64)
    return index_set(np.flatnonzero(_accept(scores, k, cfg)), g.n)


def candidate_triple(g: SignedGraph, k: int, u1: int, u2: int, u3: int,
                     cfg: SolverConfig = DEFAULT) -> np.ndarray:
    """Vertices whose column has inner product >= k/2 with the triple column."""
    rows = g.packed
    a, b, c = (_check_vertex(g, u) for u in (u1, u2, u3))
    probe = rows[a] ^ rows[b] ^ rows[c]
    scores = g.n - 2 * np.bitwise_count(rows ^ probe).sum(axis=1).astype(np.int64)
    return index_set(np.flatnonzero(_accept(scores, k, cfg)), g.n)


def post_threshold(k: int) -> int:
    return -(-3 * k // 4)


def post_process(g: SignedGraph, guess, k: int, gamma: float = DEFAULT.gamma) -> np.ndarray:
    """All vertices with at least ceil(3k/4) neighbours inside ``guess``.

    One pass both adds missing clique members and drops outsiders; ``gamma``
    is checked for range only, the threshold is fixed at 3k/4.
    """
    if not 0 < gamma < 0.25:
        raise ValueError("gamma must lie in (0, 1/4)")
    guess = index_set(guess, g.n)
    counts = g.adjacency[:, guess].sum(axis=1)
    return index_set(np.flatnonzero(counts >= post_threshold(k)), g.n)


def _batch_masks(g: SignedGraph, probes: np.ndarray, k: int, cfg: SolverConfig) -> np.ndarray:
    """Post-processed candidate masks for a batch of probe rows (dense BLAS path)."""
    s = g.signs
    scores = probes @ s
    raw = _accept(scores, k, cfg).astype(np.float32)
    # neighbours of v in S' = (<1_S', A^v> + |S'|) / 2 - [v in S']
    inside = raw @ s
    counts = (inside + raw.sum(axis=1, keepdims=True)) / 2 - raw
    return counts >= post_threshold(k)


def _chunk(n: int) -> int:
    return max(1, (1 << 21) // n)


def sample_triples(n: int, count: int, seed: int, start: int = 0) -> np.ndarray:
    """Triples for sample indices start..start+count-1, keyed by (seed, index)."""
    return indexed_draws(derive_seed(seed, "triples"), start, count, n, width=3)


def sample_vertices(n: int, count: int, seed: int, start: int = 0) -> np.ndarray:
    return indexed_draws(derive_seed(seed, "singles"), start, count, n)


def sample_candidates(g: SignedGraph, k: int, cfg: SolverConfig = DEFAULT, seed: int = 0,
                      kind: str = "triple") -> list[np.ndarray]:
    """Post-processed candidates for every sample, in sample order (empties kept)."""
    n = g.n
    if kind == "triple":
        budget = triple_budget(n, k) if cfg.sample_budget is None else cfg.sample_budget
    elif kind == "single":
        budget = single_budget(n, k) if cfg.sample_budget is None else cfg.sample_budget
    else:
        raise ValueError(f"unknown sampler {kind!r}")
    s = g.signs
    out = []
    step = _chunk(n)
    for start in range(0, budget, step):
        count = min(step, budget - start)
        if kind == "triple":
            t = sample_triples(n, count, seed, start)
            probes = s[t[:, 0]] * s[t[:, 1]] * s[t[:, 2]]
        else:
            probes = s[sample_vertices(n, count, seed, start)]
        masks = _batch_masks(g, probes, k, cfg)
        for row in masks:
            out.append(index_set(np.flatnonzero(row), n))
    return out


# -- pruning ------------------------------------------------------------------------

def _trim(adj: np.ndarray, cand: np.ndarray, rounds: int = 3) -> np.ndarray:
    for _ in range(rounds):
        internal = adj[np.ix_(cand, cand)].sum(axis=1)
        keep = internal >= cand.size - 2
        if keep.all():
            break
        cand = cand[keep]
    return cand


def _is_clique(adj: np.ndarray, cand: np.ndarray) -> bool:
    sub = adj[np.ix_(cand, cand)]
    return int(sub.sum()) == cand.size * (cand.size - 1)


def prune_list(cands, g: SignedGraph, k: int, cfg: SolverConfig = DEFAULT) -> list[np.ndarray]:
    """Reduce candidates to pairwise nearly-disjoint k-cliques.

    Candidates outside the size window [k, (1 + gamma) k] are dropped; the
    rest are trimmed of low-degree vertices and kept only if a clique of at
    least k vertices remains.  A greedy scan then keeps a candidate when its
    overlap with every kept one is below k / overlap_den.
    """
    adj = g.adjacency
    hi = math.floor((1 + cfg.gamma) * k)
    cap = (2 * g.n) // k
    seen = set()
    kept: list[np.ndarray] = []
    kept_mask = np.zeros((0, g.n), dtype=bool)
    for cand in cands:
        cand = index_set(cand, g.n)
        if not k <= cand.size <= hi:
            continue
        key = cand.tobytes()
        if key in seen:
            continue
        seen.add(key)
        cand = _trim(adj, cand)
        if cand.size < k or not _is_clique(adj, cand):
            continue
        if kept and (kept_mask[:, cand].sum(axis=1) * cfg.overlap_den >= k).any():
            continue
        kept.append(index_set(cand, g.n))
        row = np.zeros((1, g.n), dtype=bool)
        row[0, cand] = True
        kept_mask = np.vstack([kept_mask, row])
    if len(kept) > cap:
        log.warning("pruned list has %d cliques, truncating to 2n/k = %d", len(kept), cap)
        kept = kept[:cap]
    return kept


# -- full pipelines -----------------------------------------------------------------

def solve_semirandom(g: SignedGraph, k: int, cfg: SolverConfig = DEFAULT, seed: int = 0) -> list[np.ndarray]:
    """Triple-sampling inner-product algorithm with cleanup and pruning."""
    if k < 4:
        raise ValueError("solve_semirandom needs k >= 4")
    return prune_list(sample_candidates(g, k, cfg, seed, "triple"), g, k, cfg)


def solve_single_full(g: SignedGraph, k: int, cfg: SolverConfig = DEFAULT, seed: int = 0) -> list[np.ndarray]:
    """Single-vertex variant with a ceil(10 n/k) budget."""
    if k < 4:
        raise ValueError("solve_single_full needs k >= 4")
    return prune_list(sample_candidates(g, k, cfg, seed, "single"), g, k, cfg)
