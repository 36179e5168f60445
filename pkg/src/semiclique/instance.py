"""Semirandom planted-clique instances.

The planted set ``S`` induces a complete graph, every edge between ``S`` and
the rest is an independent fair coin, and the graph on the rest is written by
an adversary strategy that sees ``S`` and the cut edges before choosing.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._rng import stream
from .linalg import FormatError, SignedGraph, index_set

log = logging.getLogger(__name__)


class InstanceError(ValueError):
    """A loaded instance failed validation."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


# -- adversary strategies ----------------------------------------------------

@dataclass(frozen=True)
class Random:
    def __str__(self):
        return "random"


@dataclass(frozen=True)
class FakeCliques:
    count: int

    def __str__(self):
        return f"fake_cliques:count={self.count}"


@dataclass(frozen=True)
class DegreeBoost:
    target_count: int
    boost: int

    def __str__(self):
        return f"degree_boost:target_count={self.target_count},boost={self.boost}"


@dataclass(frozen=True)
class SignMatch:
    victims: int
    pool: int

    def __str__(self):
        return f"sign_match:victims={self.victims},pool={self.pool}"


_STRATEGIES = {
    "random": (Random, ()),
    "fake_cliques": (FakeCliques, ("count",)),
    "degree_boost": (DegreeBoost, ("target_count", "boost")),
    "sign_match": (SignMatch, ("victims", "pool")),
}


def parse_adversary(text: str, k: int | None = None):
    """Parse the canonical form, e.g. ``sign_match:victims=4,pool=1024``.

    A value of ``k`` is replaced by the clique size when one is given.
    """
    name, _, rest = text.strip().partition(":")
    if name not in _STRATEGIES:
        raise ValueError(f"unknown adversary {name!r}")
    cls, fields = _STRATEGIES[name]
    kwargs = {}
    for part in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = part.partition("=")
        if not eq or key not in fields:
            raise ValueError(f"bad adversary parameter {part!r} for {name}")
        if value == "k":
            if k is None:
                raise ValueError("parameter value 'k' needs a clique size")
            kwargs[key] = k
        else:
            kwargs[key] = int(value)
    missing = set(fields) - set(kwargs)
    if missing:
        raise ValueError(f"{name} is missing {sorted(missing)}")
    return cls(**kwargs)


# -- instances ------------------------------------------------------------------

@dataclass(frozen=True)
class InstanceParams:
    n: int
    k: int
    seed: int
    adversary: object = field(default_factory=Random)

    def __post_init__(self):
        if not 2 <= self.k <= self.n:
            raise ValueError(f"need 2 <= k <= n, got k={self.k}, n={self.n}")


@dataclass(frozen=True, eq=False)
class Instance:
    """A graph plus its hidden planted set; ``trace`` records adversary choices."""

    graph: SignedGraph
    planted: np.ndarray
    params: InstanceParams
    trace: dict | None = None

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def k(self) -> int:
        return self.params.k

    @property
    def rest(self) -> np.ndarray:
        mask = np.ones(self.n, dtype=bool)
        mask[self.planted] = False
        return index_set(np.flatnonzero(mask), self.n)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Instance) and self.graph == other.graph
                and self.params == other.params and np.array_equal(self.planted, other.planted))


@dataclass
class AdversaryView:
    """What a strategy may read: S, the rest, the drawn cut edges and its own stream.

    ``cross[i, j]`` is the edge between ``planted[i]`` and ``rest[j]``.
    Strategies return a symmetric boolean matrix over ``rest`` plus a trace.
    """

    n: int
    k: int
    planted: np.ndarray
    rest: np.ndarray
    cross: np.ndarray
    rng: np.random.Generator

    @property
    def m(self) -> int:
        return self.rest.size

    def coin_fill(self) -> np.ndarray:
        upper = np.triu(self.rng.integers(0, 2, size=(self.m, self.m), dtype=np.uint8).astype(bool), 1)
        return upper | upper.T


def adversary_random(view: AdversaryView):
    return view.coin_fill(), {}


def adversary_fake_cliques(view: AdversaryView, count: int):
    """Pack ``count`` disjoint k-cliques into the rest over a fair-coin base."""
    if count < 0 or count * view.k > view.m:
        raise ValueError(f"cannot fit {count} disjoint {view.k}-cliques in {view.m} vertices")
    fill = view.coin_fill()
    order = view.rng.permutation(view.m)
    supports = []
    for c in range(count):
        local = np.sort(order[c * view.k:(c + 1) * view.k])
        fill[np.ix_(local, local)] = True
        supports.append(view.rest[local])
    np.fill_diagonal(fill, False)
    return fill, {"fake_cliques": supports}


def adversary_degree_boost(view: AdversaryView, target_count: int, boost: int):
    """Fair-coin base, then add ``boost`` rest-internal edges to each victim."""
    if target_count < 0 or target_count > view.m:
        raise ValueError(f"target_count={target_count} exceeds {view.m} non-clique vertices")
    if boost < 0 or boost > max(view.m - 1, 0):
        raise ValueError(f"boost={boost} exceeds n - k - 1 = {view.m - 1}")
    fill = view.coin_fill()
    victims = view.rng.choice(view.m, size=target_count, replace=False)
    added = []
    for v in victims:
        free = np.flatnonzero(~fill[v])
        free = free[free != v]
        pick = view.rng.permutation(free)[:boost]
        fill[v, pick] = fill[pick, v] = True
        added.append(int(pick.size))
    return fill, {"victims": view.rest[victims], "added": added}


def adversary_sign_match(view: AdversaryView, victims: int, pool: int):
    """Set each victim's rest-column to the signs of ``T_rest 1_B`` for a pool B.

    B is drawn uniformly from S^3.  The aggregate only involves cut edges, so it
    is computable before the rest of the graph exists.  Earlier victims own the
    edges they share with later ones.
    """
    if victims < 1 or victims > view.m:
        raise ValueError(f"victims={victims} must lie in [1, {view.m}]")
    if pool < 1 or pool > view.k ** 3:
        raise ValueError(f"pool={pool} must lie in [1, k^3]")
    local = view.rng.integers(0, view.k, size=(pool, 3))
    signs = np.where(view.cross, 1, -1).astype(np.int64)
    t = (signs[local[:, 0]] * signs[local[:, 1]] * signs[local[:, 2]]).sum(axis=0)

    fill = view.coin_fill()
    fixed = np.zeros((view.m, view.m), dtype=bool)
    order = view.rng.choice(view.m, size=victims, replace=False)
    ties = view.rng.integers(0, 2, size=view.m).astype(bool)
    want = np.where(t > 0, True, np.where(t < 0, False, ties))
    for v in order:
        free = ~fixed[v]
        free[v] = False
        fill[v, free] = fill[free, v] = want[free]
        fixed[v, :] = fixed[:, v] = True
    return fill, {
        "victims": view.rest[order],
        "pool": view.planted[local],
        "t": t,
    }


def _apply(view: AdversaryView, adversary):
    if isinstance(adversary, Random):
        return adversary_random(view)
    if isinstance(adversary, FakeCliques):
        return adversary_fake_cliques(view, adversary.count)
    if isinstance(adversary, DegreeBoost):
        return adversary_degree_boost(view, adversary.target_count, adversary.boost)
    if isinstance(adversary, SignMatch):
        return adversary_sign_match(view, adversary.victims, adversary.pool)
    raise TypeError(f"unknown adversary {adversary!r}")


def build(params: InstanceParams, planted, cut_rng, adv_rng) -> Instance:
    """Assemble an instance from an explicit planted set and two streams."""
    n, k = params.n, params.k
    planted = index_set(planted, n)
    if planted.size != k:
        raise ValueError(f"planted set has {planted.size} vertices, expected {k}")
    mask = np.ones(n, dtype=bool)
    mask[planted] = False
    rest = np.flatnonzero(mask)
    cross = cut_rng.integers(0, 2, size=(k, n - k), dtype=np.uint8).astype(bool)

    view = AdversaryView(n, k, planted, rest, cross, adv_rng)
    fill, trace = _apply(view, params.adversary)

    adj = np.zeros((n, n), dtype=bool)
    adj[np.ix_(planted, planted)] = True
    adj[np.ix_(planted, rest)] = cross
    adj[np.ix_(rest, planted)] = cross.T
    adj[np.ix_(rest, rest)] = fill
    np.fill_diagonal(adj, False)
    return Instance(SignedGraph.from_adjacency(adj), planted, params, trace)


def generate(params: InstanceParams) -> Instance:
    """Deterministic instance for ``params`` (streams: planted, cut, adversary)."""
    planted = np.sort(stream(params.seed, "planted").choice(params.n, size=params.k, replace=False))
    return build(params, planted, stream(params.seed, "cut"), stream(params.seed, "adversary"))


def replay_trace(inst: Instance) -> dict:
    """Regenerate the adversary trace of an instance (e.g. after ``load``)."""
    if inst.trace is not None:
        return inst.trace
    fresh = generate(inst.params)
    if fresh.graph != inst.graph or not np.array_equal(fresh.planted, inst.planted):
        raise ValueError("instance does not match its parameters; trace unavailable")
    return fresh.trace


def validate(inst: Instance) -> list[str]:
    """Violations of the instance contract; empty when the instance is sound."""
    out = []
    g, p = inst.graph, inst.params
    if g.n != p.n:
        out.append(f"graph has {g.n} vertices, params say n={p.n}")
    planted = np.asarray(inst.planted)
    if planted.size != p.k:
        out.append(f"planted set has {planted.size} vertices, params say k={p.k}")
    if planted.size and (np.any(np.diff(planted) <= 0) or planted[0] < 0 or planted[-1] >= g.n):
        out.append("planted set is not sorted, distinct and in range")
        return out
    adj = g.adjacency
    if not np.array_equal(adj, adj.T):
        out.append("adjacency is not symmetric")
    if np.any(np.diag(adj)):
        out.append("graph has self-loops")
    sub = adj[np.ix_(planted, planted)]
    for i, j in zip(*np.nonzero(~sub)):
        if i < j:
            out.append(f"planted pair ({planted[i]}, {planted[j]}) is not an edge")
    return out


# -- persistence ------------------------------------------------------------------

def instance_paths(path) -> tuple[Path, Path]:
    """Graph and sidecar paths for a stem (``x`` -> ``x.spc``, ``x.meta``)."""
    p = Path(path)
    if p.suffix in (".spc", ".meta"):
        p = p.with_suffix("")
    return Path(f"{p}.spc"), Path(f"{p}.meta")


def format_sidecar(inst: Instance) -> str:
    p = inst.params
    lines = [f"n={p.n}", f"k={p.k}", f"seed={p.seed}", f"adversary={p.adversary}",
             "planted=" + ",".join(str(int(v)) for v in inst.planted)]
    return "\n".join(lines) + "\n"


def parse_sidecar(text: str) -> dict:
    meta = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise FormatError(f"sidecar line {lineno}: expected key=value")
        meta[key.strip()] = value.strip()
    missing = {"n", "k", "seed", "adversary", "planted"} - set(meta)
    if missing:
        raise FormatError(f"sidecar is missing keys {sorted(missing)}")
    return meta


def save(inst: Instance, path) -> tuple[Path, Path]:
    graph_path, meta_path = instance_paths(path)
    graph_path.parent.mkdir(parents=True, exist_ok=True)
    graph_path.write_bytes(inst.graph.to_bytes())
    meta_path.write_text(format_sidecar(inst))
    return graph_path, meta_path


def load_graph(path) -> SignedGraph:
    p = Path(path)
    if p.suffix != ".spc" and not p.exists():
        p = instance_paths(p)[0]
    return SignedGraph.from_bytes(p.read_bytes())


def load(path) -> Instance:
    """Read graph and sidecar; raises FormatError or InstanceError."""
    graph_path, meta_path = instance_paths(path)
    graph = SignedGraph.from_bytes(graph_path.read_bytes())
    meta = parse_sidecar(meta_path.read_text())
    try:
        n, k, seed = int(meta["n"]), int(meta["k"]), int(meta["seed"])
        adversary = parse_adversary(meta["adversary"])
        planted = [int(x) for x in meta["planted"].split(",") if x]
    except ValueError as exc:
        raise FormatError(f"bad sidecar value: {exc}") from exc
    if n != graph.n:
        raise FormatError(f"sidecar n={n} but graph has {graph.n} vertices")
    try:
        params = InstanceParams(n, k, seed, adversary)
        inst = Instance(graph, index_set(planted, n), params)
    except ValueError as exc:
        raise InstanceError([str(exc)]) from exc
    if len(set(planted)) != len(planted):
        raise InstanceError(["planted list has duplicates"])
    problems = validate(inst)
    if problems:
        raise InstanceError(problems)
    return inst
