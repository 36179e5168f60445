"""Deterministic experiment sweeps over (n, k, adversary, solver) cells.

Config files are line oriented::

    master_seed = 7
    trials = 20
    out = results
    [cell]
    n = 1024, 4096
    k = c_sqrt_nlogn:3
    adversary = random; sign_match:victims=4,pool=1024
    solver = triple, degree

Each ``[cell]`` block expands to the cross product of its lists.  Adversary
strings contain commas, so adversaries are separated by ``;``.
"""
from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ._rng import derive_seed
from .instance import InstanceParams, generate, parse_adversary
from .solvers import (SolverConfig, single_budget, solve_degree, solve_semirandom, solve_single_full,
                      solve_spectral, triple_budget)
from . import verifier

SOLVERS = ("triple", "single", "degree", "spectral")
TRIALS_HEADER = ["n", "k", "adversary", "solver", "trial", "seed", "recovered", "list_len", "samples", "wall_ms"]
SUMMARY_HEADER = ["n", "k", "adversary", "solver", "trials", "success_rate", "mean_list_len", "mean_wall_ms"]


class ConfigError(ValueError):
    """Malformed or infeasible experiment configuration."""


@dataclass(frozen=True)
class Cell:
    n: int
    k: int
    adversary: str
    solver: str

    def key(self) -> tuple:
        return (self.n, self.k, self.adversary, self.solver)


@dataclass
class ExperimentConfig:
    cells: list[Cell]
    trials: int = 1
    master_seed: int = 0
    out: Path = Path("results")
    solver_config: SolverConfig = field(default_factory=SolverConfig)
    bounds: bool = False
    record_timing: bool = True
    threads: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        for c in self.cells:
            check_cell(c)


@dataclass(frozen=True)
class TrialRecord:
    n: int
    k: int
    adversary: str
    solver: str
    trial: int
    seed: int
    recovered: bool
    list_len: int
    samples: int
    wall_ms: float

    def row(self) -> list:
        return [self.n, self.k, self.adversary, self.solver, self.trial, self.seed,
                "true" if self.recovered else "false", self.list_len, self.samples, f"{self.wall_ms:.3f}"]


@dataclass(frozen=True)
class CellSummary:
    n: int
    k: int
    adversary: str
    solver: str
    trials: int
    success_rate: float
    mean_list_len: float
    mean_wall_ms: float

    def row(self) -> list:
        return [self.n, self.k, self.adversary, self.solver, self.trials,
                f"{self.success_rate:.6g}", f"{self.mean_list_len:.6g}", f"{self.mean_wall_ms:.3f}"]


def resolve_k(rule: str, n: int) -> list[int]:
    """Explicit list, ``c_sqrt_nlogn:c`` (ceil(c sqrt(n ln n))) or ``c_n34:c`` (ceil(c n^0.75))."""
    rule = rule.strip()
    try:
        if rule.startswith("c_sqrt_nlogn:"):
            return [math.ceil(float(rule.split(":", 1)[1]) * math.sqrt(n * math.log(n)))]
        if rule.startswith("c_n34:"):
            return [math.ceil(float(rule.split(":", 1)[1]) * n ** 0.75)]
        return [int(x) for x in rule.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad k rule {rule!r}") from exc


def check_cell(c: Cell) -> None:
    if not 2 <= c.k <= c.n:
        raise ConfigError(f"infeasible cell: k={c.k}, n={c.n}")
    if c.solver not in SOLVERS:
        raise ConfigError(f"unknown solver {c.solver!r}")
    if c.solver in ("triple", "single") and c.k < 4:
        raise ConfigError(f"solver {c.solver} needs k >= 4")
    try:
        parse_adversary(c.adversary)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _truthy(value: str) -> bool:
    return value.strip().lower() in ("1", "true", "yes", "on")


def parse_config(text: str, base: Path | None = None) -> ExperimentConfig:
    """Parse the line-oriented config format; errors name the offending line."""
    top: dict[str, str] = {}
    blocks: list[dict[str, tuple[int, str]]] = []
    starts: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line in ("[cell]", "cell"):
            blocks.append({})
            starts.append(lineno)
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = key.strip(), value.strip()
        if blocks:
            blocks[-1][key] = (lineno, value)
        else:
            top[key] = value
    if not blocks:
        raise ConfigError("config has no [cell] blocks")

    cells = []
    for start, block in zip(starts, blocks):
        for required in ("n", "k", "adversary", "solver"):
            if required not in block:
                raise ConfigError(f"line {start}: cell block is missing '{required}'")
        line_n, ns = block["n"]
        try:
            n_values = [int(x) for x in ns.split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigError(f"line {line_n}: bad n list {ns!r}") from exc
        advs = [a.strip() for a in block["adversary"][1].split(";") if a.strip()]
        solvers = [s.strip() for s in block["solver"][1].split(",") if s.strip()]
        for n in n_values:
            for k in resolve_k(block["k"][1], n):
                for adv in advs:
                    try:
                        canonical = str(parse_adversary(adv, k=k))
                    except ValueError as exc:
                        raise ConfigError(f"line {block['adversary'][0]}: {exc}") from exc
                    for s in solvers:
                        cells.append(Cell(n, k, canonical, s))

    def num(key, default, cast=int):
        try:
            return cast(top[key]) if key in top else default
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {top[key]!r}") from exc

    budget = top.get("budget")
    cfg = SolverConfig(
        gamma=num("gamma", 0.1, float),
        sample_budget=int(budget) if budget not in (None, "", "default") else None,
        power_iters=num("power_iters", 100),
    )
    out = Path(top.get("out", "results"))
    if base is not None and not out.is_absolute():
        out = base / out
    return ExperimentConfig(
        cells=cells, trials=num("trials", 1), master_seed=num("master_seed", 0), out=out,
        solver_config=cfg, bounds=_truthy(top.get("bounds", "false")),
        record_timing=_truthy(top.get("record_timing", "true")), threads=num("threads", 1),
    )


def trial_seeds(master: int, cell: Cell, t: int) -> tuple[int, int]:
    inst_seed = derive_seed(master, *cell.key(), t)
    return inst_seed, derive_seed(master, *cell.key(), t, "solve")


def _solve(solver: str, graph, k: int, cfg: SolverConfig, seed: int) -> tuple[list, int]:
    n = graph.n
    if solver == "triple":
        used = triple_budget(n, k) if cfg.sample_budget is None else cfg.sample_budget
        return solve_semirandom(graph, k, cfg, seed), used
    if solver == "single":
        used = single_budget(n, k) if cfg.sample_budget is None else cfg.sample_budget
        return solve_single_full(graph, k, cfg, seed), used
    if solver == "degree":
        return [solve_degree(graph, k)], 0
    if solver == "spectral":
        return [solve_spectral(graph, k, cfg, seed)], cfg.power_iters
    raise ConfigError(f"unknown solver {solver!r}")


def run_trial(cfg: ExperimentConfig, cell: Cell, t: int) -> TrialRecord:
    inst_seed, solve_seed = trial_seeds(cfg.master_seed, cell, t)
    inst = generate(InstanceParams(cell.n, cell.k, inst_seed, parse_adversary(cell.adversary)))
    start = time.perf_counter()
    found, used = _solve(cell.solver, inst.graph, cell.k, cfg.solver_config, solve_seed)
    wall = (time.perf_counter() - start) * 1000 if cfg.record_timing else 0.0
    # ground truth is consulted only here, after the solver has returned
    recovered = any(np.array_equal(c, inst.planted) for c in found)
    return TrialRecord(cell.n, cell.k, cell.adversary, cell.solver, t, inst_seed,
                       recovered, len(found), used, wall)


def run_cell(cfg: ExperimentConfig, cell: Cell) -> list[TrialRecord]:
    check_cell(cell)
    return [run_trial(cfg, cell, t) for t in range(cfg.trials)]


def _run_task(args):
    cfg, cell, t = args
    return run_trial(cfg, cell, t)


def run_all(cfg: ExperimentConfig) -> list[TrialRecord]:
    for c in cfg.cells:
        check_cell(c)
    tasks = [(cfg, c, t) for c in cfg.cells for t in range(cfg.trials)]
    if cfg.threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            records = list(pool.map(_run_task, tasks))
    else:
        records = [_run_task(task) for task in tasks]
    order = {c.key(): i for i, c in enumerate(cfg.cells)}
    return sorted(records, key=lambda r: (order[(r.n, r.k, r.adversary, r.solver)], r.trial))


def summarize(records) -> list[CellSummary]:
    records = list(records)
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        groups.setdefault((r.n, r.k, r.adversary, r.solver), []).append(r)
    out = []
    for (n, k, adv, solver), rs in groups.items():
        m = len(rs)
        out.append(CellSummary(n, k, adv, solver, m,
                               sum(r.recovered for r in rs) / m,
                               sum(r.list_len for r in rs) / m,
                               sum(r.wall_ms for r in rs) / m))
    return out


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def trials_csv(records) -> str:
    return _csv(TRIALS_HEADER, (r.row() for r in records))


def summary_csv(summaries) -> str:
    return _csv(SUMMARY_HEADER, (s.row() for s in summaries))


def read_summary(path) -> list[CellSummary]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != SUMMARY_HEADER:
            raise ConfigError(f"{path}: unexpected summary header {reader.fieldnames}")
        return [CellSummary(int(r["n"]), int(r["k"]), r["adversary"], r["solver"], int(r["trials"]),
                            float(r["success_rate"]), float(r["mean_list_len"]), float(r["mean_wall_ms"]))
                for r in reader]


def cell_bounds(cfg: ExperimentConfig, cell: Cell) -> list[verifier.BoundReport]:
    """A light verifier pass on the trial-0 instance of a cell."""
    inst_seed, _ = trial_seeds(cfg.master_seed, cell, 0)
    inst = generate(InstanceParams(cell.n, cell.k, inst_seed, parse_adversary(cell.adversary)))
    seed = derive_seed(cfg.master_seed, *cell.key(), "bounds")
    reports = []
    for b in (1, 4, 16):
        if b <= cell.k ** 3:
            reports.append(verifier.l1_aggregate_stats(inst, b, 20, seed))
            reports.append(verifier.l1_deviation_stats(inst, b, 20, seed))
    reports.append(verifier.gaussian_max_stat(inst, 100, 10, seed))
    return reports


def manifest_text(cfg: ExperimentConfig) -> str:
    sc = cfg.solver_config
    lines = [
        f"master_seed = {cfg.master_seed}",
        f"trials = {cfg.trials}",
        f"bounds = {str(cfg.bounds).lower()}",
        f"record_timing = {str(cfg.record_timing).lower()}",
        f"gamma = {sc.gamma}",
        f"threshold = {sc.threshold_num}/{sc.threshold_den}",
        f"overlap_den = {sc.overlap_den}",
        f"power_iters = {sc.power_iters}",
        f"budget = {'default' if sc.sample_budget is None else sc.sample_budget}",
        "log = natural (k rules use ln n)",
    ]
    for c in cfg.cells:
        seeds = ",".join(str(trial_seeds(cfg.master_seed, c, t)[0]) for t in range(cfg.trials))
        lines.append(f"cell = n={c.n} k={c.k} adversary={c.adversary} solver={c.solver} seeds={seeds}")
    return "\n".join(lines) + "\n"


def sweep(cfg: ExperimentConfig) -> dict[str, Path]:
    """Run every cell and write trials.csv, summary.csv, bounds.csv and manifest."""
    records = run_all(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"trials": out / "trials.csv", "summary": out / "summary.csv", "manifest": out / "manifest"}
    paths["trials"].write_text(trials_csv(records))
    paths["summary"].write_text(summary_csv(summarize(records)))
    paths["manifest"].write_text(manifest_text(cfg))
    if cfg.bounds:
        reports = [r for c in cfg.cells for r in cell_bounds(cfg, c)]
        paths["bounds"] = out / "bounds.csv"
        paths["bounds"].write_text(verifier.reports_to_csv(reports))
    return paths


def with_threads(cfg: ExperimentConfig, threads: int) -> ExperimentConfig:
    return replace(cfg, threads=threads)
