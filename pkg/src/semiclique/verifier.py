"""Monte Carlo checks of the l1 aggregate analysis.

Each check returns a :class:`BoundReport` with the measured statistic, the
bound it is compared against (hidden constants pinned explicitly) and the
raw ratio, so constants can be revisited without touching code.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ._rng import derive_seed, stream
from .instance import Instance, build, replay_trace
from .linalg import triple_rows

log = logging.getLogger(__name__)

EXACT_TRIPLE_LIMIT = 10 ** 6
CSV_HEADER = ["name", "n", "k", "adversary", "b_size/m", "reps", "observed", "bound", "ratio", "pass"]


@dataclass
class BoundReport:
    name: str
    observed: float
    bound: float
    reps: int
    passed: bool
    n: int = 0
    k: int = 0
    adversary: str = ""
    size: int = 0
    samples: np.ndarray | None = field(default=None, repr=False)
    extra: dict = field(default_factory=dict, repr=False)

    @property
    def ratio(self) -> float:
        if self.bound == 0:
            return math.inf if self.observed > 0 else 0.0
        return self.observed / self.bound

    def row(self) -> list:
        return [self.name, self.n, self.k, self.adversary, self.size, self.reps,
                f"{self.observed:.6g}", f"{self.bound:.6g}", f"{self.ratio:.6g}",
                "true" if self.passed else "false"]


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def _report(inst: Instance, name, observed, bound, reps, passed, size=0, **kw) -> BoundReport:
    return BoundReport(name, float(observed), float(bound), reps, bool(passed),
                       inst.n, inst.k, str(inst.params.adversary), size, **kw)


def _outsider(inst: Instance, v: int) -> int:
    v = int(v)
    if not 0 <= v < inst.n:
        raise ValueError(f"vertex {v} out of range")
    if np.any(inst.planted == v):
        raise ValueError(f"vertex {v} is in the planted set")
    return v


def _uniform_triples(inst: Instance, rng: np.random.Generator, m: int) -> np.ndarray:
    return inst.planted[rng.integers(0, inst.k, size=(m, 3))]


def _distinct_triples(inst: Instance, rng: np.random.Generator, m: int) -> np.ndarray:
    """m distinct triples from S^3 (a set B, not a multiset)."""
    k = inst.k
    if m > k ** 3:
        raise ValueError(f"|B| = {m} exceeds k^3 = {k ** 3}")
    codes = np.unique(rng.integers(0, k ** 3, size=m))
    while codes.size < m:
        codes = np.unique(np.concatenate([codes, rng.integers(0, k ** 3, size=m - codes.size)]))
    codes = rng.permutation(codes)
    local = np.stack([codes // (k * k), (codes // k) % k, codes % k], axis=1)
    return inst.planted[local]


def _inner_many(inst: Instance, triples: np.ndarray, vs: np.ndarray) -> np.ndarray:
    """inner(triple column b, column v) for every b, v: shape (len(triples), len(vs))."""
    g = inst.graph
    cols = np.ascontiguousarray(g.signs[vs].T)
    out = np.empty((len(triples), len(vs)), dtype=np.int64)
    step = max(1, (1 << 23) // g.n)
    for start in range(0, len(triples), step):
        chunk = triples[start:start + step]
        out[start:start + len(chunk)] = triple_rows(g, chunk) @ cols
    return out


# -- bad-set counts ---------------------------------------------------------------

def bad_pairs(inst: Instance, v: int) -> int:
    """|{u in S : <A^u, A^v> >= k/2}| for an outside vertex v."""
    v = _outsider(inst, v)
    s = inst.graph.signs
    scores = s[inst.planted] @ s[v]
    return int(np.count_nonzero(2 * scores.astype(np.int64) >= inst.k))


def bad_triple_counts(inst: Instance, vs, m: int, seed: int) -> tuple[np.ndarray, bool]:
    """Estimated bad-triple counts for several outside vertices at once.

    Exact enumeration of S^3 when k^3 <= 10^6, otherwise m shared uniform
    samples scaled by k^3.
    """
    vs = np.array([_outsider(inst, v) for v in vs], dtype=np.int64)
    if m < 1:
        raise ValueError("m must be positive")
    k = inst.k
    exact = k ** 3 <= EXACT_TRIPLE_LIMIT
    bad = np.zeros(len(vs), dtype=np.int64)
    if exact:
        p = inst.planted
        for a in p:
            grid = np.stack([np.full(k * k, a), np.repeat(p, k), np.tile(p, k)], axis=1)
            bad += (2 * _inner_many(inst, grid, vs) >= k).sum(axis=0)
        return bad.astype(float), True
    rng = stream(seed, "bad_triples")
    total = 0
    while total < m:
        count = min(1 << 14, m - total)
        triples = _uniform_triples(inst, rng, count)
        bad += (2 * _inner_many(inst, triples, vs) >= k).sum(axis=0)
        total += count
    return bad * (k ** 3 / m), False


def bad_triples_estimate(inst: Instance, v: int, m: int, seed: int) -> tuple[float, bool]:
    est, exact = bad_triple_counts(inst, [v], m, seed)
    return float(est[0]), exact


# -- l1 aggregate -----------------------------------------------------------------

def _l1_draws(inst: Instance, b_size: int, reps: int, seed: int) -> np.ndarray:
    if not 1 <= b_size <= 1 << 20:
        raise ValueError("b_size must lie in [1, 2^20]")
    rng = stream(seed, "l1")
    g, rest = inst.graph, inst.rest
    out = np.empty(reps, dtype=np.int64)
    for r in range(reps):
        B = _distinct_triples(inst, rng, b_size)
        t = np.zeros(rest.size, dtype=np.int64)
        step = max(1, (1 << 22) // g.n)
        for start in range(0, b_size, step):
            t += triple_rows(g, B[start:start + step])[:, rest].sum(axis=0).astype(np.int64)
        out[r] = np.abs(t).sum()
    return out


def l1_mean_bound(inst: Instance, b_size: int) -> float:
    return (inst.n - inst.k) * math.sqrt(b_size)


def l1_max_bound(inst: Instance, b_size: int) -> float:
    nk = inst.n - inst.k
    return nk * math.sqrt(b_size) + 10 * b_size * math.sqrt(3 * nk * math.log(inst.k))


def l1_aggregate_stats(inst: Instance, b_size: int, reps: int, seed: int) -> BoundReport:
    """Mean of ||T_rest 1_B||_1 over uniform B subset of S^3 versus (n-k) sqrt|B|.

    ``samples`` holds every draw; ``extra['max']`` and ``extra['max_bound']``
    carry the deviation check on the same draws.
    """
    draws = _l1_draws(inst, b_size, reps, seed)
    bound = l1_mean_bound(inst, b_size)
    mean = float(draws.mean())
    return _report(inst, "l1_mean", mean, bound, reps, mean <= bound, b_size, samples=draws,
                   extra={"max": int(draws.max()), "max_bound": l1_max_bound(inst, b_size),
                          "draws_within": int((draws <= bound).sum())})


def l1_deviation_stats(inst: Instance, b_size: int, reps: int, seed: int) -> BoundReport:
    """Max over the same draws versus (n-k) sqrt|B| + 10 |B| sqrt(3 (n-k) ln k)."""
    draws = _l1_draws(inst, b_size, reps, seed)
    bound = l1_max_bound(inst, b_size)
    return _report(inst, "l1_max", draws.max(), bound, reps, draws.max() <= bound, b_size,
                   samples=draws, extra={"draws_within": int((draws <= bound).sum())})


# -- Gaussian maxima ----------------------------------------------------------------

def gaussian_max_stat(inst: Instance, m_triples: int, reps: int, seed: int,
                      triples=None) -> BoundReport:
    """Mean over reps of max_b <g, T^b_rest> against 2 sqrt(2 (n-k) ln m).

    Fresh triples are drawn each rep unless ``triples`` fixes them.
    """
    if m_triples < 2:
        raise ValueError("m_triples must be at least 2")
    rng = stream(seed, "gaussian")
    g, rest = inst.graph, inst.rest
    nk = rest.size
    fixed = None if triples is None else np.asarray(triples, dtype=np.int64).reshape(-1, 3)
    maxima = np.empty(reps)
    weak = np.empty(reps)
    for r in range(reps):
        gauss = rng.standard_normal(nk)
        B = _uniform_triples(inst, rng, m_triples) if fixed is None else fixed
        vals = triple_rows(g, B)[:, rest].astype(np.float64) @ gauss
        maxima[r] = vals.max()
        weak[r] = nk * np.abs(gauss).max()
    bound = 2 * math.sqrt(2 * nk * math.log(m_triples))
    mean = float(maxima.mean())
    # the coordinate-wise bound scales like (n-k) rather than sqrt(n-k)
    log.info("gaussian max: triple max %.1f vs coordinate-wise bound %.1f", mean, weak.mean())
    return _report(inst, "gaussian_max", mean, bound, reps, mean <= bound, m_triples,
                   samples=maxima, extra={"coordinate_bound": float(weak.mean())})


# -- Hoelder equality under sign matching -------------------------------------------

def holder_equality_check(inst: Instance, v: int, B=None) -> BoundReport:
    """Exact accounting of <t, A^v_rest> against ||t||_1 for a sign-matching victim.

    Only coordinates the adversary could not set (v itself and edges owned by
    earlier victims) may disagree in sign; the check passes when
    lhs == rhs - 2 * defect with the defect summed over those coordinates alone.
    """
    trace = replay_trace(inst)
    if "pool" not in trace:
        raise ValueError("instance was not built with the sign_match adversary")
    victims = [int(x) for x in trace["victims"]]
    v = int(v)
    if v not in victims:
        raise ValueError(f"vertex {v} is not a recorded victim")
    B = trace["pool"] if B is None else np.asarray(B, dtype=np.int64).reshape(-1, 3)
    rest = inst.rest
    t = triple_rows(inst.graph, B)[:, rest].sum(axis=0, dtype=np.float64).astype(np.int64)
    col = inst.graph.signs[v, rest].astype(np.int64)
    lhs = int(t @ col)
    rhs = int(np.abs(t).sum())
    uncontrolled = np.isin(rest, [v] + victims[:victims.index(v)])
    mismatch = (t * col < 0) & uncontrolled
    defect = int(np.abs(t[mismatch]).sum())
    return _report(inst, "holder_equality", lhs, rhs, 1, lhs == rhs - 2 * defect, len(B),
                   extra={"lhs": lhs, "rhs": rhs, "defect": defect})


# -- boring part --------------------------------------------------------------------

def boring_part_stat(inst: Instance, v: int, b_size: int, reps: int, seed: int) -> BoundReport:
    """Exact identity <T_S 1_B, A^v_S> = |B| sum_{w in S} A^v_w, then a Hoeffding-style bound.

    Passes when the identity holds for every draw and
    |sum_{w in S} A^v_w| <= 10 sqrt(k ln n).
    """
    v = _outsider(inst, v)
    rng = stream(seed, "boring")
    g, S = inst.graph, inst.planted
    col_s = g.signs[v, S].astype(np.int64)
    side = int(col_s.sum())
    failures = 0
    for _ in range(reps):
        B = _distinct_triples(inst, rng, b_size)
        agg_s = triple_rows(g, B)[:, S].sum(axis=0, dtype=np.float64).astype(np.int64)
        if int(agg_s @ col_s) != b_size * side:
            failures += 1
    bound = 10 * math.sqrt(inst.k * math.log(inst.n))
    return _report(inst, "boring_part", abs(side), bound, reps, failures == 0 and abs(side) <= bound,
                   b_size, extra={"identity_failures": failures, "side_sum": side})


# -- symmetrization -----------------------------------------------------------------

def resample(inst: Instance, seed: int, rep: int) -> Instance:
    """Same planted set and parameters, fresh cut edges and adversary fill."""
    key = derive_seed(seed, rep)
    return build(inst.params, inst.planted, stream(key, "cut"), stream(key, "adversary"))


def sym_deviation_estimate(inst: Instance, family, reps: int, seed: int) -> BoundReport:
    """Compare E max_B (||t||_1 - E||t||_1) with sqrt(2 pi) E max_B <g, t>.

    ``family`` is a list of triple lists (each a set B; the empty B is
    allowed).  Randomness of the graph is resampled ``reps`` times.  Passes
    when lhs <= 3 rhs.
    """
    if inst.n > 256:
        raise ValueError("sym_deviation_estimate is limited to n <= 256")
    family = [np.asarray(B, dtype=np.int64).reshape(-1, 3) for B in family]
    if not family or len(family) > 10 ** 4:
        raise ValueError("family must hold between 1 and 10^4 sets")
    grng = stream(seed, "gaussian")
    l1 = np.zeros((reps, len(family)), dtype=np.int64)
    gmax = np.empty(reps)
    for r in range(reps):
        fresh = resample(inst, seed, r)
        rest = fresh.rest
        gauss = grng.standard_normal(rest.size)
        vals = np.empty(len(family))
        for j, B in enumerate(family):
            if len(B) == 0:
                vals[j] = 0.0
                continue
            t = triple_rows(fresh.graph, B)[:, rest].sum(axis=0, dtype=np.float64)
            l1[r, j] = int(np.abs(t).sum())
            vals[j] = t @ gauss
        gmax[r] = vals.max()
    # exact integer centering: reps * l1 - sum_r l1
    centred = reps * l1 - l1.sum(axis=0, keepdims=True)
    lhs = centred.max(axis=1).sum() / reps ** 2
    rhs = math.sqrt(2 * math.pi) * float(gmax.mean())
    return _report(inst, "symmetrization", lhs, 3 * rhs, reps, lhs <= 3 * rhs, len(family),
                   extra={"lhs": float(lhs), "rhs": rhs})


# -- double counting to per-triple success -------------------------------------------

def diamond_to_success(inst: Instance, triple_samples: int, v_samples: int, seed: int) -> BoundReport:
    """Median over sampled triples in S^3 of the (scaled) number of misclassified outsiders."""
    rng = stream(seed, "diamond")
    rest = inst.rest
    triples = _uniform_triples(inst, rng, triple_samples)
    if v_samples >= rest.size:
        vs, scale = rest, 1.0
    else:
        vs = np.sort(rng.choice(rest, size=v_samples, replace=False))
        scale = rest.size / v_samples
    counts = (2 * _inner_many(inst, triples, vs) >= inst.k).sum(axis=1) * scale
    median = float(np.median(counts))
    n, k = inst.n, inst.k
    bound = max(n ** 3 / k ** 5, 0.1 * k)
    return _report(inst, "diamond_success", median, bound, triple_samples, median <= bound,
                   triple_samples, samples=counts)


# -- second-moment structure of T ---------------------------------------------------

def pairwise_covariance_check(inst: Instance, pairs, rows, reps: int, seed: int) -> BoundReport:
    """Empirical covariance of T^b_w and T^b'_w over resampled graphs.

    Passes when every |cov| <= 4 / sqrt(reps).
    """
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2, 3)
    rows = np.asarray(rows, dtype=np.int64)
    acc_xy = np.zeros((len(pairs), len(rows)))
    acc_x = np.zeros_like(acc_xy)
    acc_y = np.zeros_like(acc_xy)
    for r in range(reps):
        g = resample(inst, seed, r).graph
        x = triple_rows(g, pairs[:, 0])[:, rows]
        y = triple_rows(g, pairs[:, 1])[:, rows]
        acc_xy += x * y
        acc_x += x
        acc_y += y
    cov = acc_xy / reps - (acc_x / reps) * (acc_y / reps)
    worst = float(np.abs(cov).max())
    bound = 4 / math.sqrt(reps)
    return _report(inst, "pairwise_covariance", worst, bound, reps, worst <= bound, len(pairs))


def gram_diagonal_check(inst: Instance, triples, reps: int, seed: int) -> BoundReport:
    """E[<T^b_rest, T^b'_rest>] over resampled graphs.

    Restricted to the non-clique rows the diagonal is exactly n - k every rep
    and off-diagonal means must lie within 4 n / sqrt(reps) of zero.
    """
    triples = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
    n = inst.n
    rest = inst.rest
    acc = np.zeros((len(triples), len(triples)))
    diag_ok = True
    for r in range(reps):
        T = triple_rows(resample(inst, seed, r).graph, triples)[:, rest].astype(np.float64)
        gram = T @ T.T
        diag_ok &= bool(np.all(np.diag(gram) == rest.size))
        acc += gram
    mean = acc / reps
    off = mean[~np.eye(len(triples), dtype=bool)]
    worst = float(np.abs(off).max()) if off.size else 0.0
    bound = 4 * n / math.sqrt(reps)
    return _report(inst, "gram_diagonal", worst, bound, reps, diag_ok and worst <= bound, len(triples),
                   extra={"diagonal_exact": diag_ok})
