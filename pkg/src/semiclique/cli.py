"""Command line: ``semiclique {gen,solve,sweep,verify,plot}``.

Exit codes: 0 success, 2 usage, 3 config, 4 I/O or format, 5 a verify check failed.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import harness, verifier
from .instance import (InstanceError, InstanceParams, generate, load, load_graph, parse_adversary,
                       replay_trace, save)
from .linalg import FormatError
from .plotting import success_svg
from .solvers import SolverConfig, solve_degree, solve_semirandom, solve_single_full, solve_spectral

EXIT_USAGE, EXIT_CONFIG, EXIT_IO, EXIT_CHECK = 2, 3, 4, 5
CHECKS = ("l1", "deviation", "gaussian", "holder", "boring", "diamond", "bad_pairs", "bad_triples", "sym")


class UsageError(Exception):
    pass


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    return int(os.environ.get("SEMICLIQUE_THREADS", "1"))


def cmd_gen(args) -> int:
    if not 2 <= args.k <= args.n:
        raise UsageError(f"need 2 <= k <= n (got n={args.n}, k={args.k})")
    try:
        adversary = parse_adversary(args.adversary, k=args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        inst = generate(InstanceParams(args.n, args.k, args.seed, adversary))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    graph_path, meta_path = save(inst, args.out)
    print(f"graph: {graph_path}")
    print(f"planted: {meta_path}")
    print(f"adversary: {adversary}")
    return 0


def cmd_solve(args) -> int:
    graph = load_graph(args.graph)
    if not 4 <= args.k <= graph.n:
        raise UsageError(f"k={args.k} must lie in [4, n={graph.n}]")
    cfg = SolverConfig(sample_budget=args.budget)
    if args.solver == "triple":
        found = solve_semirandom(graph, args.k, cfg, args.seed)
    elif args.solver == "single":
        found = solve_single_full(graph, args.k, cfg, args.seed)
    elif args.solver == "degree":
        found = [solve_degree(graph, args.k)]
    else:
        found = [solve_spectral(graph, args.k, cfg, args.seed)]
    for cand in found:
        print(",".join(str(int(v)) for v in cand))
    return 0


def cmd_sweep(args) -> int:
    path = Path(args.config)
    cfg = harness.parse_config(path.read_text(), base=path.parent)
    if args.out:
        cfg.out = Path(args.out)
    cfg.threads = _threads(args)
    paths = harness.sweep(cfg)
    for name, p in paths.items():
        print(f"{name}: {p}")
    return 0


def _run_check(name: str, inst, args) -> list[verifier.BoundReport]:
    rng = np.random.default_rng(args.seed)
    outside = inst.rest
    v = int(outside[rng.integers(outside.size)])
    if name == "l1":
        return [verifier.l1_aggregate_stats(inst, args.b_size, args.reps, args.seed)]
    if name == "deviation":
        return [verifier.l1_deviation_stats(inst, args.b_size, args.reps, args.seed)]
    if name == "gaussian":
        return [verifier.gaussian_max_stat(inst, args.m, args.reps, args.seed)]
    if name == "holder":
        trace = replay_trace(inst)
        if "pool" not in trace:
            raise UsageError("holder check needs a sign_match instance")
        return [verifier.holder_equality_check(inst, int(x)) for x in trace["victims"]]
    if name == "boring":
        return [verifier.boring_part_stat(inst, v, args.b_size, args.reps, args.seed)]
    if name == "diamond":
        return [verifier.diamond_to_success(inst, args.reps, min(512, outside.size), args.seed)]
    bound = inst.n ** 2 / inst.k ** 2
    if name == "bad_pairs":
        c = verifier.bad_pairs(inst, v)
        return [verifier._report(inst, "bad_pairs", c, bound, 1, c <= bound)]
    if name == "bad_triples":
        est, exact = verifier.bad_triples_estimate(inst, v, args.m, args.seed)
        return [verifier._report(inst, "bad_triples", est, bound, 1, est <= bound, args.m,
                                 extra={"exact": exact})]
    if name == "sym":
        S = inst.planted
        pool = S[rng.integers(0, inst.k, size=(16, 3))]
        return [verifier.sym_deviation_estimate(inst, [[b] for b in pool], args.reps, args.seed)]
    raise UsageError(f"unknown check {name!r}")


def cmd_verify(args) -> int:
    inst = load(args.graph)
    names = [c.strip() for c in args.checks.split(",") if c.strip()]
    bad = [c for c in names if c not in CHECKS]
    if bad or not names:
        raise UsageError(f"unknown checks {bad}; choose from {', '.join(CHECKS)}")
    reports = [r for name in names for r in _run_check(name, inst, args)]
    Path(args.out).write_text(verifier.reports_to_csv(reports))
    for r in reports:
        print(f"{r.name}: observed={r.observed:.6g} bound={r.bound:.6g} {'PASS' if r.passed else 'FAIL'}")
    return 0 if all(r.passed for r in reports) else EXIT_CHECK


def cmd_plot(args) -> int:
    summaries = harness.read_summary(args.summary)
    Path(args.out).write_text(success_svg(summaries))
    print(f"plot: {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="semiclique", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None, help="worker cap (env SEMICLIQUE_THREADS)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--adversary", default="random")
    g.add_argument("--out", required=True, help="path stem; writes STEM.spc and STEM.meta")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="solve from the graph file only")
    s.add_argument("--graph", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--solver", choices=harness.SOLVERS, default="triple")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--budget", type=int, default=None)
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep", help="run an experiment config")
    w.add_argument("--config", required=True)
    w.add_argument("--out", default=None)
    w.set_defaults(func=cmd_sweep)

    v = sub.add_parser("verify", help="run verifier checks on an instance")
    v.add_argument("--graph", required=True, help="instance stem (graph plus sidecar)")
    v.add_argument("--checks", default="l1,holder")
    v.add_argument("--out", default="bounds.csv")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--reps", type=int, default=100)
    v.add_argument("--b-size", dest="b_size", type=int, default=4)
    v.add_argument("--m", type=int, default=1000)
    v.set_defaults(func=cmd_verify)

    pl = sub.add_parser("plot", help="SVG of success rate against k")
    pl.add_argument("--summary", required=True)
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, FormatError, InstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
